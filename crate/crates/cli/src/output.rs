//! JSON document shapes. Counts that can exceed double precision are
//! emitted as decimal strings; everything else is plain JSON numbers.
//! Field order is fixed by declaration order, so output is byte-stable
//! for a given tool version.

use serde::Serialize;

use bosecount::asymptotics::ComparisonRow;
use bosecount::exact::{CountTable, CumulativeTable, JointTable};
use bosecount::gpf::DiagnosticRow;
use bosecount::spectrum::ZetaProfile;

#[derive(Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

pub fn tool_info() -> ToolInfo {
    ToolInfo { name: "bosecount", version: env!("CARGO_PKG_VERSION") }
}

#[derive(Serialize)]
pub struct CountDoc {
    pub model: String,
    pub e_max: u64,
    pub omega: Vec<String>,
}

pub fn count_doc(table: &CountTable) -> CountDoc {
    CountDoc {
        model: table.model.to_string(),
        e_max: table.e_max,
        omega: table.omegas().iter().map(|v| v.to_string()).collect(),
    }
}

#[derive(Serialize)]
pub struct JointRowDoc {
    pub n: u64,
    pub e: u64,
    pub omega: String,
}

#[derive(Serialize)]
pub struct JointDoc {
    pub model: String,
    pub e_max: u64,
    pub n_max: u64,
    pub rows: Vec<JointRowDoc>,
}

pub fn joint_doc(joint: &JointTable) -> JointDoc {
    let mut rows = Vec::new();
    for n in 1..=joint.n_max {
        for e in 0..=joint.e_max {
            rows.push(JointRowDoc { n, e, omega: joint.omega_ne(n, e).to_string() });
        }
    }
    JointDoc { model: joint.model.to_string(), e_max: joint.e_max, n_max: joint.n_max, rows }
}

/// Profile constants as reported to the user; keys follow the notation of
/// the underlying formulas (A_j residues, K_j principal-part coefficients).
#[derive(Serialize)]
pub struct ProfileDoc {
    pub n: u32,
    #[serde(rename = "A")]
    pub residues: Vec<f64>,
    #[serde(rename = "K")]
    pub k_coeffs: Vec<f64>,
    #[serde(rename = "Z0")]
    pub z0: f64,
    #[serde(rename = "Zprime0")]
    pub zprime0: f64,
    #[serde(rename = "detP")]
    pub det_p: f64,
    pub vol: f64,
    #[serde(rename = "Bn")]
    pub b_n: f64,
}

pub fn profile_doc(p: &ZetaProfile) -> ProfileDoc {
    ProfileDoc {
        n: p.n,
        residues: p.residues.clone(),
        k_coeffs: p.k_coeffs.clone(),
        z0: p.z0,
        zprime0: p.zprime0,
        det_p: p.det_p,
        vol: p.vol_sigma,
        b_n: p.b_n,
    }
}

#[derive(Serialize)]
pub struct EstimateRowDoc {
    pub e: u64,
    pub ln_estimate: f64,
    pub formula_id: String,
}

#[derive(Serialize)]
pub struct ComparisonRowDoc {
    pub e: u64,
    pub ln_exact: f64,
    pub ln_estimate: f64,
    pub ratio: f64,
    pub formula_id: String,
}

pub fn comparison_rows(rows: &[ComparisonRow]) -> Vec<ComparisonRowDoc> {
    rows.iter()
        .map(|r| ComparisonRowDoc {
            e: r.e,
            ln_exact: r.ln_exact,
            ln_estimate: r.ln_estimate,
            ratio: r.ratio,
            formula_id: r.formula.to_string(),
        })
        .collect()
}

#[derive(Serialize)]
pub struct ContourRowDoc {
    pub e: u64,
    pub omega: String,
    pub estimate: f64,
    pub rel_error: f64,
    pub imag_ratio: f64,
}

#[derive(Serialize)]
pub struct DiagnosticRowDoc {
    pub x: f64,
    pub y: f64,
    #[serde(rename = "re_logG")]
    pub re_log_g: f64,
    #[serde(rename = "im_logG")]
    pub im_log_g: f64,
    #[serde(rename = "re_J")]
    pub re_j: Option<f64>,
    #[serde(rename = "im_J")]
    pub im_j: Option<f64>,
    pub margin: Option<f64>,
}

pub fn diagnostic_rows(rows: &[DiagnosticRow]) -> Vec<DiagnosticRowDoc> {
    rows.iter()
        .map(|r| DiagnosticRowDoc {
            x: r.x,
            y: r.y,
            re_log_g: r.re_log_g,
            im_log_g: r.im_log_g,
            re_j: r.re_j,
            im_j: r.im_j,
            margin: r.margin,
        })
        .collect()
}

#[derive(Serialize)]
pub struct SaddleRowDoc {
    pub e: u64,
    pub x_e: f64,
    pub m_e: f64,
    pub eta: f64,
    pub exponent: f64,
}

#[derive(Serialize)]
pub struct StatisticPoint {
    pub e: u64,
    pub value: f64,
}

#[derive(Serialize)]
pub struct TablesDoc {
    pub e_max: u64,
    pub omega: Vec<String>,
    pub cumulative: Vec<String>,
}

pub fn tables_doc(table: &CountTable, cum: &CumulativeTable) -> TablesDoc {
    TablesDoc {
        e_max: table.e_max,
        omega: table.omegas().iter().map(|v| v.to_string()).collect(),
        cumulative: (0..=cum.e_max).map(|e| cum.d(e).to_string()).collect(),
    }
}

#[derive(Serialize)]
pub struct StatisticsDoc {
    pub knopp: Vec<StatisticPoint>,
    pub weyl: Vec<StatisticPoint>,
    pub saddle: Vec<SaddleRowDoc>,
    pub comparison: Vec<ComparisonRowDoc>,
}

#[derive(Serialize)]
pub struct ChecksDoc {
    pub saddle_ok: bool,
    pub eta_positive: bool,
    pub statistics_below_limit: bool,
    pub comparison_finite: bool,
}

impl ChecksDoc {
    pub fn all_pass(&self) -> bool {
        self.saddle_ok && self.eta_positive && self.statistics_below_limit && self.comparison_finite
    }
}

#[derive(Serialize)]
pub struct ReportDoc {
    pub tool: ToolInfo,
    pub model: String,
    pub profile: Option<ProfileDoc>,
    pub tables: TablesDoc,
    pub statistics: Option<StatisticsDoc>,
    pub checks: Option<ChecksDoc>,
    pub warnings: Vec<String>,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    s.push('\n');
    s
}
