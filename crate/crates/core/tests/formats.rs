//! On-disk format round trips: spectrum files in, CSV tables out.

use bosecount::error::Error;
use bosecount::exact;
use bosecount::gpf::{self, DiagnosticRow};
use bosecount::spectrum::{load_custom_spectrum, SpectrumModel};

#[test]
fn spectrum_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gaps.spec");
    std::fs::write(
        &path,
        "# n=2\n# a sparse two-species toy\n2 3\n# interior comment\n7 1\n",
    )
    .unwrap();
    let loaded = load_custom_spectrum(&path).unwrap();
    let direct = SpectrumModel::custom(vec![(2, 3), (7, 1)], 2).unwrap();
    assert_eq!(loaded, direct);
    let a = exact::brute_force_oracle(&loaded, 7).unwrap();
    let b = exact::brute_force_oracle(&direct, 7).unwrap();
    assert_eq!(a.omegas(), b.omegas());
}

#[test]
fn missing_spectrum_file_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = load_custom_spectrum(dir.path().join("absent.spec")).unwrap_err();
    assert!(matches!(err, Error::Io(_)), "got {err:?}");
}

#[test]
fn malformed_spectrum_file_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.spec");
    std::fs::write(&path, "# n=1\n3 2\n2 5\n").unwrap();
    match load_custom_spectrum(&path).unwrap_err() {
        Error::Parse { line, .. } => assert_eq!(line, 3),
        other => panic!("expected parse error, got {other:?}"),
    }
}

#[test]
fn count_csv_shape() {
    let table = exact::count_states(&SpectrumModel::Partitions, 5).unwrap();
    let mut buf = Vec::new();
    table.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "E,omega");
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[1], "0,1");
    assert_eq!(lines[6], "5,7");
}

#[test]
fn joint_csv_skips_vacuum_row() {
    let joint = exact::count_joint(&SpectrumModel::Partitions, 4, 4).unwrap();
    let mut buf = Vec::new();
    joint.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,E,omega");
    assert!(lines[1..].iter().all(|l| !l.starts_with("0,")));
    // N = 1..4, E = 0..4 per N.
    assert_eq!(lines.len(), 1 + 4 * 5);
    assert!(lines.contains(&"2,4,2"));
    // Column sums over N recover the unrestricted counts.
    let total: u64 = lines[1..]
        .iter()
        .filter_map(|l| {
            let mut it = l.split(',');
            let _n = it.next()?;
            let e: u64 = it.next()?.parse().ok()?;
            let w: u64 = it.next()?.parse().ok()?;
            (e == 4).then_some(w)
        })
        .sum();
    assert_eq!(total, 5);
}

#[test]
fn cumulative_csv_shape() {
    let table = exact::count_states(&SpectrumModel::Partitions, 4).unwrap();
    let cum = exact::cumulative(&table);
    let mut buf = Vec::new();
    cum.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "E,D");
    // D(4) = 1+1+2+3+5 = 12.
    assert_eq!(lines[5], "4,12");
}

#[test]
fn diagnostic_csv_blank_cells_for_missing_columns() {
    let rows = vec![
        DiagnosticRow {
            x: 0.1,
            y: 0.0,
            re_log_g: 1.5,
            im_log_g: 0.0,
            re_j: Some(0.25),
            im_j: Some(0.0),
            margin: None,
        },
        DiagnosticRow {
            x: 0.1,
            y: 0.5,
            re_log_g: 1.2,
            im_log_g: -0.3,
            re_j: None,
            im_j: None,
            margin: Some(-2.0),
        },
    ];
    let mut buf = Vec::new();
    gpf::write_diagnostic_csv(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,y,re_logG,im_logG,re_J,im_J,margin");
    assert_eq!(lines[1].split(',').count(), 7);
    assert!(lines[1].ends_with(','), "margin cell empty: {}", lines[1]);
    let second: Vec<&str> = lines[2].split(',').collect();
    assert_eq!(second[4], "");
    assert_eq!(second[5], "");
    assert_eq!(second[6], "-2");
}
