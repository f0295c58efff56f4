use std::path::PathBuf;

use trigonal_core::curve::pack::{compute_checksums, read_checksums, swap_defect};
use trigonal_core::curve::{validate_pack, CurveModel};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

const CURVES: [(u32, u32); 4] = [(3, 7), (3, 8), (3, 10), (3, 11)];

#[test]
fn every_pack_validates() {
    for (n, s) in CURVES {
        let curve = CurveModel::load(&data_dir(), n, s).unwrap();
        let report = validate_pack(&curve, &curve.pack);
        for f in &report.failures {
            eprintln!("{} {}/{}: {} {}", report.curve, f.group, f.formula, f.check, f.detail);
        }
        assert!(report.formulas > 0);
        assert!(report.passed(), "({n},{s}) pack has {} failures", report.failures.len());
    }
}

#[test]
fn checksums_cover_every_file() {
    for (n, s) in CURVES {
        let dir = data_dir().join(format!("{n}_{s}"));
        let listed = read_checksums(&dir).unwrap();
        assert!(!listed.is_empty(), "({n},{s}) has no CHECKSUMS file");
        assert_eq!(
            std::fs::read_to_string(dir.join("CHECKSUMS")).unwrap(),
            compute_checksums(&dir).unwrap()
        );
    }
}

#[test]
fn shipped_curve_equations_match_the_model() {
    for (n, s) in [(3, 7), (3, 8)] {
        let curve = CurveModel::load(&data_dir(), n, s).unwrap();
        let shipped = curve.pack.formula("differentials", "curve").unwrap();
        let shipped = shipped.with_registry(&curve.coordinate_registry()).unwrap();
        assert_eq!(shipped, curve.curve_equation());
    }
}

#[test]
fn fundamental_polynomials_are_symmetric_and_homogeneous() {
    let expected_weight = [(3, 7, -28), (3, 8, -32)];
    for (n, s, weight) in expected_weight {
        let curve = CurveModel::load(&data_dir(), n, s).unwrap();
        let f = curve.require_f().unwrap();
        assert!(swap_defect(f).unwrap().is_zero());
        assert_eq!(f.is_homogeneous().unwrap(), Some(weight));
    }
}

#[test]
fn shipped_sw_weights() {
    for (n, s, weight) in [(3, 7, 16), (3, 8, 21)] {
        let curve = CurveModel::load(&data_dir(), n, s).unwrap();
        let sw = curve.pack.formula("sw", "SW").unwrap();
        assert_eq!(sw.is_homogeneous().unwrap(), Some(weight));
    }
}

#[test]
fn every_shipped_formula_round_trips() {
    use trigonal_core::curve::{parse_file, serialize_file};
    for (n, s) in CURVES {
        let curve = CurveModel::bare(n, s).unwrap();
        let dir = data_dir().join(format!("{n}_{s}"));
        let mut files: Vec<_> = std::fs::read_dir(&dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|x| x == "frm"))
            .collect();
        files.sort();
        assert!(!files.is_empty());
        for path in files {
            let text = std::fs::read_to_string(&path).unwrap();
            let parsed = parse_file(&text, Some(&curve.scheme)).unwrap();
            let canonical = serialize_file(&parsed);
            let again = parse_file(&canonical, Some(&curve.scheme)).unwrap();
            assert_eq!(parsed.len(), again.len(), "{}", path.display());
            for (a, b) in parsed.iter().zip(&again) {
                assert_eq!(a.name, b.name);
                let (pa, pb) = trigonal_core::algebra::Poly::align(&a.poly, &b.poly).unwrap();
                assert_eq!(pa, pb, "{} [{}]", path.display(), a.name);
            }
            assert_eq!(serialize_file(&again), canonical, "{}", path.display());
        }
    }
}
