//! Subcommand implementations. Each returns an [`Outcome`] carrying both the
//! JSON report and its text rendering.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Value};

use trigonal_core::algebra::poly::format_monomial;
use trigonal_core::algebra::rational;
use trigonal_core::algebra::{Poly, SymbolKind, Var};
use trigonal_core::curve::pack::compute_checksums;
use trigonal_core::curve::{curve_dir, gap_sequence, parse_curve_id, validate_pack, CurveModel};
use trigonal_core::eval::{sorted_multisets, AbelianValues, SigmaModel};
use trigonal_core::kleinian::{
    eliminate_w, generate_rho, jacobi_invert_symbolic, load_resultant_table, parity_split, rational_ratio,
    reduce_degree, FormulaForm, KleinianOptions, OffsetSign, PRINTED,
};
use trigonal_core::schur::{candidate_monomials, schur_weierstrass, summarize, u_registry};
use trigonal_core::series::{local_expansions, ExpansionInput};
use trigonal_core::verify::{
    addition_pairs, basis_rank_report, boussinesq_check, hirota_consistency, inversion_report, sample_points,
    verify_addition, verify_relation_suite, VerificationReport, REPORT_SCHEMA,
};
use trigonal_core::{Error, Result};

use crate::{Command, FormArg, Outcome, RunConfig, SignArg};

/// Curves exercised by the default suite.
const SUITE_CURVES: [(u32, u32); 2] = [(3, 7), (3, 8)];
const INVERSION_CURVES: [(u32, u32); 4] = [(3, 7), (3, 8), (3, 10), (3, 11)];

pub fn run(cfg: &RunConfig, cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Gaps(a) => gaps(a.curve.resolve()?),
        Command::Weights(a) => weights(cfg, a.curve.resolve()?),
        Command::Sw(a) => sw(cfg, a.curve.resolve()?, a.show),
        Command::Expansions(a) => expansions(cfg, a.curve.resolve()?),
        Command::Rho(a) => {
            let opts = KleinianOptions {
                sign: match a.sign {
                    SignArg::Plus => OffsetSign::Plus,
                    SignArg::Minus => OffsetSign::Minus,
                },
                form: match a.form {
                    FormArg::Cleared => FormulaForm::Cleared,
                    FormArg::Quotient => FormulaForm::Quotient,
                },
            };
            rho(cfg, a.curve.resolve()?, a.count, opts)
        }
        Command::Resultant(a) => match (a.i, a.j) {
            (Some(i), Some(j)) => resultant_pair(cfg, a.curve.resolve()?, i, j, a.deep, a.show),
            _ => resultant_table(cfg, a.curve.resolve()?, a.deep),
        },
        Command::Reduce(a) => reduce(cfg, a.curve.resolve()?, a.target, a.points),
        Command::Invert(a) => invert(cfg, a.curve.resolve()?, a.points),
        Command::Verify(a) => verify(cfg, a.curve.resolve()?, &a.suite, a.points),
        Command::Hirota(a) => hirota(cfg, a.curve.resolve()?, a.points.unwrap_or(20)),
        Command::Boussinesq(a) => boussinesq(cfg, a.curve.resolve()?, a.points.unwrap_or(5)),
        Command::Addition(a) => addition(cfg, a.curve.resolve()?, a.points.unwrap_or(10)),
        Command::Candidates(a) => candidates(cfg, a.curve.resolve()?, a.k),
        Command::Rank(a) => rank(cfg, a.curve.resolve()?, a.points.unwrap_or(80)),
        Command::ValidateData(a) => {
            let only = a.curve.as_deref().map(parse_curve_id).transpose()?;
            validate_data(cfg, only)
        }
        Command::All(a) => all(cfg, a.deep),
    }
}

fn data_dir(cfg: &RunConfig) -> PathBuf {
    if let Some(d) = &cfg.data_dir {
        return d.clone();
    }
    let local = PathBuf::from("data");
    if local.is_dir() {
        return local;
    }
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data"))
}

/// The curve with its formula pack when one is shipped, otherwise the bare model.
fn load_curve(cfg: &RunConfig, (n, s): (u32, u32)) -> Result<CurveModel> {
    let dir = data_dir(cfg);
    if curve_dir(&dir, n, s).join("curve.toml").is_file() {
        CurveModel::load(&dir, n, s)
    } else {
        CurveModel::bare(n, s)
    }
}

fn status(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn timed<T>(label: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let t = Instant::now();
    let out = f();
    log::info!("{label}: {:.2?}", t.elapsed());
    out
}

fn gaps((n, s): (u32, u32)) -> Result<Outcome> {
    let g = gap_sequence(n, s)?;
    let text = g.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ") + "\n";
    Ok(Outcome {
        json: json!({"schema": REPORT_SCHEMA, "curve": format!("{n},{s}"), "genus": g.len(), "gaps": g}),
        text,
        passed: true,
    })
}

fn weights(cfg: &RunConfig, id: (u32, u32)) -> Result<Outcome> {
    let c = load_curve(cfg, id)?;
    let w = &c.weights;
    let list = |xs: &[i32]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let parity = format!("{:?}", w.sigma_parity).to_lowercase();
    let text = format!(
        "u weights: {}\nλ weights: {}\nσ weight: {} ({parity})\n",
        list(&w.u_weights),
        list(&w.lam_weights),
        w.sigma_weight
    );
    Ok(Outcome {
        json: json!({
            "schema": REPORT_SCHEMA,
            "curve": c.id(),
            "u_weights": w.u_weights,
            "lam_weights": w.lam_weights,
            "sigma_weight": w.sigma_weight,
            "sigma_parity": parity,
        }),
        text,
        passed: true,
    })
}

fn sw(cfg: &RunConfig, id: (u32, u32), show: bool) -> Result<Outcome> {
    let c = load_curve(cfg, id)?;
    let poly = timed("sw", || schur_weierstrass(c.n, c.s))?;
    let summary = summarize(&poly)?;
    let ureg = u_registry(&c.scheme);
    let mut text = format!(
        "genus {}, weight {}, {} monomials\n",
        summary.genus, summary.weight, summary.monomials
    );
    let mut data = Value::Null;
    let mut passed = true;
    if let Some(group) = c.pack.group("sw") {
        let print = group.require("SW")?.with_registry(&ureg)?;
        let allowed: Vec<_> = group
            .get("SW_garbled_monomial")
            .map(|p| p.with_registry(&ureg))
            .transpose()?
            .map(|p| p.terms().iter().map(|(m, _)| m.clone()).collect())
            .unwrap_or_default();
        let diff = &poly - &print;
        let mut differences = Vec::new();
        let mut unexpected = 0;
        for (m, _) in diff.terms() {
            let known = allowed.contains(m);
            unexpected += usize::from(!known);
            differences.push(json!({
                "monomial": format_monomial(&ureg, m),
                "generated": rational::format(&poly.coefficient(m)),
                "shipped": rational::format(&print.coefficient(m)),
                "recorded": known,
            }));
            let _ = writeln!(
                text,
                "differs at {}: generated {}, shipped {}{}",
                format_monomial(&ureg, m),
                poly.coefficient(m),
                print.coefficient(m),
                if known { " (recorded transcription gap)" } else { "" }
            );
        }
        passed = unexpected == 0;
        if differences.is_empty() {
            text.push_str("matches the shipped polynomial term for term\n");
        }
        data = json!({"status": status(passed), "differences": differences});
    }
    if show {
        let _ = writeln!(text, "{poly}");
    }
    Ok(Outcome {
        json: json!({
            "schema": REPORT_SCHEMA,
            "curve": c.id(),
            "genus": summary.genus,
            "weight": summary.weight,
            "monomials": summary.monomials,
            "polynomial": poly.to_string(),
            "data": data,
        }),
        text,
        passed,
    })
}

fn expansions(cfg: &RunConfig, id: (u32, u32)) -> Result<Outcome> {
    let c = load_curve(cfg, id)?;
    let reg = c.coordinate_registry();
    let g: Vec<Poly> = c.g.iter().map(|p| p.with_registry(&reg)).collect::<Result<_>>()?;
    let e = local_expansions(&ExpansionInput { n: c.n, s: c.s, reg: &reg, g: &g }, cfg.order)?;
    let mut text = format!("x = {}\ny = {}\n", e.x, e.y);
    for (i, u) in e.u.iter().enumerate() {
        let _ = writeln!(text, "u{} = {u}", i + 1);
    }
    Ok(Outcome {
        json: json!({
            "schema": REPORT_SCHEMA,
            "curve": c.id(),
            "order": cfg.order,
            "x": e.x.to_string(),
            "y": e.y.to_string(),
            "u": e.u.iter().map(|u| u.to_string()).collect::<Vec<_>>(),
        }),
        text,
        passed: true,
    })
}

fn rho(cfg: &RunConfig, id: (u32, u32), count: usize, opts: KleinianOptions) -> Result<Outcome> {
    if count == 0 {
        return Err(Error::usage("--count must be positive"));
    }
    let c = load_curve(cfg, id)?;
    c.require_f()?;
    let rhos = timed("rho", || generate_rho(&c, count, opts))?;
    let shipped = c.pack.group("rho");
    let mut text = String::new();
    let mut entries = Vec::new();
    let mut passed = true;
    for r in &rhos {
        let weight = r.poly.is_homogeneous()?;
        let print = shipped.and_then(|g| g.get(&format!("rho{}", r.index)));
        let ratio = print.map(|p| rational_ratio(&r.poly, p));
        if matches!(ratio, Some(None)) || weight.is_none() {
            passed = false;
        }
        let _ = writeln!(
            text,
            "ρ{} (ξ^{}, weight {}, {} terms){}",
            r.index,
            r.xi_exponent,
            weight.map_or("-".into(), |w| w.to_string()),
            r.poly.len(),
            match &ratio {
                Some(Some(q)) => format!(": {q} × shipped"),
                Some(None) => ": differs from shipped".into(),
                None => String::new(),
            }
        );
        let _ = writeln!(text, "  {}", r.poly);
        entries.push(json!({
            "index": r.index,
            "xi_exponent": r.xi_exponent,
            "weight": weight,
            "terms": r.poly.len(),
            "ratio_to_shipped": ratio.map(|q| q.map(|q| rational::format(&q))),
            "polynomial": r.poly.to_string(),
        }));
    }
    Ok(Outcome {
        json: json!({
            "schema": REPORT_SCHEMA,
            "curve": c.id(),
            "options": opts,
            "rhos": entries,
            "passed": passed,
        }),
        text,
        passed,
    })
}

/// Entries with `i > 2` are the expensive ones.
fn is_deep(i: usize) -> bool {
    i > 2
}

fn resultant_pair(cfg: &RunConfig, id: (u32, u32), i: usize, j: usize, deep: bool, show: bool) -> Result<Outcome> {
    if i == 0 || j <= i {
        return Err(Error::usage("need 1 <= i < j"));
    }
    if is_deep(i) && !deep {
        return Err(Error::usage(format!("ρ_({i},{j}) lies beyond ρ_(2,9); pass --deep")));
    }
    let c = load_curve(cfg, id)?;
    c.require_f()?;
    let rhos = timed("rho", || generate_rho(&c, j, PRINTED))?;
    let reference = c.pack.group("rho").and_then(|g| g.get(&format!("rho{i}{j}")));
    let (p, st) = timed("resultant", || eliminate_w(&rhos[i - 1].poly, &rhos[j - 1].poly, reference))?;
    let table = load_resultant_table(&data_dir(cfg), c.n, c.s).ok();
    let printed = table.as_ref().and_then(|t| t.iter().find(|e| e.i == i && e.j == j));
    let ratio = reference.map(|r| rational_ratio(&p, r));
    let degree_ok = printed.map_or(true, |e| e.z_degree == st.z_degree);
    let passed = degree_ok && st.weight.is_some() && !matches!(ratio, Some(None));
    let mut text = format!(
        "ρ_({i},{j}): z-degree {}, {} terms, weight {}\n",
        st.z_degree,
        st.terms,
        st.weight.map_or("-".into(), |w| w.to_string())
    );
    if let Some(e) = printed {
        let _ = writeln!(text, "table: z-degree {}, {} terms", e.z_degree, e.terms);
    }
    match &ratio {
        Some(Some(q)) => {
            let _ = writeln!(text, "equals {q} × shipped ρ_({i},{j})");
        }
        Some(None) => text.push_str("differs from shipped polynomial\n"),
        None => {}
    }
    if show {
        let _ = writeln!(text, "{p}");
    }
    Ok(Outcome {
        json: json!({
            "schema": REPORT_SCHEMA,
            "curve": c.id(),
            "i": i,
            "j": j,
            "z_degree": st.z_degree,
            "terms": st.terms,
            "weight": st.weight,
            "table_z_degree": printed.map(|e| e.z_degree),
            "table_terms": printed.map(|e| e.terms),
            "ratio_to_shipped": ratio.map(|q| q.map(|q| rational::format(&q))),
            "polynomial": p.to_string(),
            "passed": passed,
        }),
        text,
        passed,
    })
}

fn resultant_table(cfg: &RunConfig, id: (u32, u32), deep: bool) -> Result<Outcome> {
    let c = load_curve(cfg, id)?;
    c.require_f()?;
    let table: Vec<_> = load_resultant_table(&data_dir(cfg), c.n, c.s)?
        .into_iter()
        .filter(|e| deep || !is_deep(e.i))
        .collect();
    let max_j = table.iter().map(|e| e.j).max().unwrap_or(2);
    let rhos = timed("rho", || generate_rho(&c, max_j, PRINTED))?;
    let mut entries = Vec::new();
    let mut text = String::new();
    let mut passed = true;
    let mut term_mismatches = 0;
    for e in &table {
        let (_, st) = timed(&format!("ρ_({},{})", e.i, e.j), || {
            eliminate_w(&rhos[e.i - 1].poly, &rhos[e.j - 1].poly, None)
        })?;
        let degree_ok = st.z_degree == e.z_degree && st.weight.is_some();
        passed &= degree_ok;
        let diff = st.terms as i64 - e.terms as i64;
        term_mismatches += usize::from(diff != 0);
        let _ = writeln!(
            text,
            "{} ρ_({},{}): z-degree {} (table {}), terms {} (table {}{})",
            status(degree_ok),
            e.i,
            e.j,
            st.z_degree,
            e.z_degree,
            st.terms,
            e.terms,
            if diff != 0 { format!(", diff {diff:+}") } else { String::new() }
        );
        entries.push(json!({
            "i": e.i,
            "j": e.j,
            "z_degree": st.z_degree,
            "table_z_degree": e.z_degree,
            "terms": st.terms,
            "table_terms": e.terms,
            "term_difference": diff,
            "weight": st.weight,
            "status": status(degree_ok),
        }));
    }
    let _ = writeln!(text, "{} entries, {} term-count mismatches", table.len(), term_mismatches);
    Ok(Outcome {
        json: json!({
            "schema": REPORT_SCHEMA,
            "curve": c.id(),
            "deep": deep,
            "entries": entries,
            "term_mismatches": term_mismatches,
            "passed": passed,
        }),
        text,
        passed,
    })
}

fn reduce(cfg: &RunConfig, id: (u32, u32), target: usize, points: usize) -> Result<Outcome> {
    if target < 3 {
        return Err(Error::usage("--target must be at least 3"));
    }
    let c = load_curve(cfg, id)?;
    c.require_f()?;
    let rhos = timed("rho", || generate_rho(&c, target, PRINTED))?;
    let reference = c.pack.group("rho").and_then(|g| g.get("rho12"));
    let (pivot, _) = eliminate_w(&rhos[0].poly, &rhos[1].poly, reference)?;
    let (full, _) = timed("resultant", || eliminate_w(&rhos[0].poly, &rhos[target - 1].poly, None))?;
    let rels = reduce_degree(&full, &pivot, c.genus)?;
    let model = SigmaModel::new(c.n, c.s)?;
    let (pts, _) = sample_points(&model, points, cfg.seed)?;
    let mut values: Vec<AbelianValues> = pts.iter().map(|p| AbelianValues::new(&model, p)).collect::<Result<_>>()?;
    let mut entries = Vec::new();
    let mut text = String::new();
    let mut passed = true;
    for (k, rel) in rels.iter().enumerate() {
        let (even, odd) = parity_split(rel)?;
        let mut worst = [rational::int(0), rational::int(0)];
        for v in values.iter_mut() {
            for (slot, part) in worst.iter_mut().zip([&even, &odd]) {
                let x = v.evaluate(part)?;
                if num_traits::Signed::abs(&x) > *slot {
                    *slot = num_traits::Signed::abs(&x);
                }
            }
        }
        let ok = num_traits::Zero::is_zero(&worst[0]) && num_traits::Zero::is_zero(&worst[1]) && !rel.is_zero();
        passed &= ok;
        let _ = writeln!(
            text,
            "{} z^{k}: {} terms, weight {}, residual even {} odd {}",
            status(ok),
            rel.len(),
            rel.is_homogeneous()?.map_or("-".into(), |w| w.to_string()),
            worst[0],
            worst[1]
        );
        entries.push(json!({
            "power": k,
            "weight": rel.is_homogeneous()?,
            "terms": rel.len(),
            "even": even.to_string(),
            "odd": odd.to_string(),
            "residual_even": rational::format(&worst[0]),
            "residual_odd": rational::format(&worst[1]),
            "status": status(ok),
        }));
    }
    Ok(Outcome {
        json: json!({
            "schema": REPORT_SCHEMA,
            "curve": c.id(),
            "seed": cfg.seed,
            "target": [1, target],
            "pivot": [1, 2],
            "relations": entries,
            "passed": passed,
        }),
        text,
        passed,
    })
}

fn invert(cfg: &RunConfig, id: (u32, u32), points: usize) -> Result<Outcome> {
    let c = load_curve(cfg, id)?;
    let pair = timed("inversion pair", || jacobi_invert_symbolic(&c))?;
    let model = SigmaModel::new(c.n, c.s)?;
    let r = timed("invert", || inversion_report(&c, &pair, &model, points, cfg.seed, cfg.precision))?;
    let mut text = format!(
        "{} ({}): {} points at {} digits, max residual {} (tolerance {}), resampled {}\n",
        status(r.passed),
        r.curve,
        r.samples.len(),
        r.digits,
        r.max_residual,
        r.tolerance,
        r.resampled
    );
    for s in &r.samples {
        let _ = writeln!(text, "  u = ({}): residual {}, Vieta {}", s.u.join(", "), s.max_residual, s.vieta_error);
    }
    Ok(Outcome { json: serde_json::to_value(&r).expect("report"), text, passed: r.passed })
}

fn relation_text(r: &VerificationReport) -> String {
    let mut text = String::new();
    for rel in &r.relations {
        let _ = writeln!(
            text,
            "{} {} (weight {}) residual {}",
            if rel.status == trigonal_core::verify::Status::Pass { "pass" } else { "FAIL" },
            rel.id,
            rel.weight.map_or("-".into(), |w| w.to_string()),
            rel.residual
        );
    }
    let failed = r.relations.iter().filter(|x| x.status != trigonal_core::verify::Status::Pass).count();
    let _ = writeln!(
        text,
        "{} {}: {} relations, {} failed, {} points (seed {})",
        r.suite,
        r.curve,
        r.relations.len(),
        failed,
        r.points.len(),
        r.seed
    );
    text
}

fn verify(cfg: &RunConfig, id: (u32, u32), suite: &str, points: usize) -> Result<Outcome> {
    let c = load_curve(cfg, id)?;
    let model = SigmaModel::new(c.n, c.s)?;
    let r = timed("verify", || verify_relation_suite(&c, &model, suite, points, cfg.seed))?;
    Ok(Outcome { text: relation_text(&r), passed: r.passed(), json: serde_json::to_value(&r).expect("report") })
}

/// All index sets of size 2, 3 and 4, plus every Q symbol used by the shipped
/// q4 and q6 relations.
fn hirota_index_sets(c: &CurveModel) -> Vec<Vec<u8>> {
    let g = c.genus as u8;
    let mut sets: Vec<Vec<u8>> = (2..=4).flat_map(|k| sorted_multisets(g, k)).collect();
    for group in ["q4", "q6"] {
        let Some(grp) = c.pack.group(group) else { continue };
        for (_, p) in grp.iter() {
            for v in p.registry().vars() {
                if let Var::Sym(s) = v {
                    if s.kind == SymbolKind::Q && !sets.contains(&s.indices) {
                        sets.push(s.indices.clone());
                    }
                }
            }
        }
    }
    sets
}

fn hirota(cfg: &RunConfig, id: (u32, u32), points: usize) -> Result<Outcome> {
    let c = load_curve(cfg, id)?;
    let model = SigmaModel::new(c.n, c.s)?;
    let sets = hirota_index_sets(&c);
    let r = timed("hirota", || hirota_consistency(&c, &model, &sets, points, cfg.seed))?;
    Ok(Outcome { text: relation_text(&r), passed: r.passed(), json: serde_json::to_value(&r).expect("report") })
}

fn boussinesq(cfg: &RunConfig, id: (u32, u32), points: usize) -> Result<Outcome> {
    let c = load_curve(cfg, id)?;
    let model = SigmaModel::new(c.n, c.s)?;
    let r = timed("boussinesq", || boussinesq_check(&c, &model, points, cfg.seed))?;
    let g = c.genus;
    let text = format!(
        "{} ({}): Q[{g},{g},{g},{g}] = {} p[{},{}]; {} differentiated twice in u{g}: residual {}\n",
        status(r.passed()),
        r.curve,
        r.constant.as_deref().unwrap_or("(no common constant)"),
        g - 1,
        g - 1,
        r.relation,
        r.residual
    );
    Ok(Outcome { text, passed: r.passed(), json: serde_json::to_value(&r).expect("report") })
}

fn addition(cfg: &RunConfig, id: (u32, u32), points: usize) -> Result<Outcome> {
    let c = load_curve(cfg, id)?;
    let model = SigmaModel::new(c.n, c.s)?;
    let pairs = addition_pairs(&model, points, cfg.seed)?;
    let r = timed("addition", || verify_addition(&c, &model, &pairs, cfg.seed))?;
    let mut text = String::new();
    for case in &r.cases {
        let ok = case.status == trigonal_core::verify::Status::Pass;
        let _ = writeln!(
            text,
            "{} u = ({}), v = ({}): lhs {} rhs {}",
            status(ok),
            case.u.join(", "),
            case.v.join(", "),
            case.lhs,
            case.rhs
        );
        for (m, val) in &case.contributions {
            let _ = writeln!(text, "    {m}: {val}");
        }
    }
    let _ = writeln!(text, "addition {}: {} pairs, {}", r.curve, r.cases.len(), status(r.passed()));
    Ok(Outcome { text, passed: r.passed(), json: serde_json::to_value(&r).expect("report") })
}

fn candidates(cfg: &RunConfig, id: (u32, u32), k: i64) -> Result<Outcome> {
    let c = load_curve(cfg, id)?;
    let monos = candidate_monomials(&c.weights, c.n, k)?;
    let ureg = u_registry(&c.scheme);
    let names: Vec<String> = monos.iter().map(|m| format_monomial(&ureg, m)).collect();
    let mut contains_sw = Value::Null;
    if k == c.weights.sigma_weight {
        let sw = schur_weierstrass(c.n, c.s)?.with_registry(&ureg)?;
        contains_sw = json!(sw.terms().iter().all(|(m, _)| monos.contains(m)));
    }
    let mut text = format!("{} monomials of weight {k}\n", names.len());
    for n in &names {
        let _ = writeln!(text, "{n}");
    }
    if let Value::Bool(b) = contains_sw {
        let _ = writeln!(text, "every σ-polynomial monomial is a candidate: {b}");
    }
    Ok(Outcome {
        json: json!({
            "schema": REPORT_SCHEMA,
            "curve": c.id(),
            "k": k,
            "count": names.len(),
            "monomials": names,
            "contains_sw": contains_sw,
        }),
        text,
        passed: contains_sw != Value::Bool(false),
    })
}

fn rank(cfg: &RunConfig, id: (u32, u32), points: usize) -> Result<Outcome> {
    let c = load_curve(cfg, id)?;
    let model = SigmaModel::new(c.n, c.s)?;
    let r = timed("rank", || basis_rank_report(&c, &model, points, cfg.seed))?;
    let text = format!(
        "{}: rank {} of {} functions at {} points (seed {})\n",
        r.curve, r.rank, r.functions, r.points, r.seed
    );
    Ok(Outcome { text, passed: true, json: serde_json::to_value(&r).expect("report") })
}

fn pack_dirs(dir: &Path) -> Result<Vec<(u32, u32)>> {
    let rd = std::fs::read_dir(dir).map_err(|source| Error::Io { path: dir.display().to_string(), source })?;
    let mut out = Vec::new();
    for entry in rd {
        let entry = entry.map_err(|source| Error::Io { path: dir.display().to_string(), source })?;
        let name = entry.file_name().to_string_lossy().replace('_', ",");
        if entry.path().join("curve.toml").is_file() {
            if let Ok(id) = parse_curve_id(&name) {
                out.push(id);
            }
        }
    }
    out.sort();
    Ok(out)
}

fn validate_data(cfg: &RunConfig, only: Option<(u32, u32)>) -> Result<Outcome> {
    let dir = data_dir(cfg);
    let curves = match only {
        Some(id) => vec![id],
        None => pack_dirs(&dir)?,
    };
    if curves.is_empty() {
        return Err(Error::usage(format!("no curve packs under {}", dir.display())));
    }
    let mut packs = Vec::new();
    let mut text = String::new();
    let mut passed = true;
    for (n, s) in curves {
        let c = CurveModel::load(&dir, n, s)?;
        let report = validate_pack(&c, &c.pack);
        let cdir = curve_dir(&dir, n, s);
        let listed = std::fs::read_to_string(cdir.join("CHECKSUMS")).unwrap_or_default();
        let checksums_ok = listed == compute_checksums(&cdir)?;
        let ok = report.passed() && checksums_ok;
        passed &= ok;
        let _ = writeln!(
            text,
            "{} {}: {} formulas, {} checks, {} failures, checksums {}",
            status(ok),
            report.curve,
            report.formulas,
            report.checks_run,
            report.failures.len(),
            if checksums_ok { "ok" } else { "stale" }
        );
        for f in &report.failures {
            let _ = writeln!(text, "    {}/{}: {} {}", f.group, f.formula, f.check, f.detail);
        }
        let mut v = serde_json::to_value(&report).expect("report");
        v["checksums_ok"] = json!(checksums_ok);
        packs.push(v);
    }
    Ok(Outcome {
        json: json!({"schema": REPORT_SCHEMA, "packs": packs, "passed": passed}),
        text,
        passed,
    })
}

/// The default end-to-end suite, one section per check.
fn all(cfg: &RunConfig, deep: bool) -> Result<Outcome> {
    let mut sections: Vec<(String, Outcome)> = Vec::new();
    let mut push = |name: String, out: Result<Outcome>| -> Result<()> {
        sections.push((name, out?));
        Ok(())
    };
    push("validate-data".into(), validate_data(cfg, None))?;
    for id in SUITE_CURVES {
        let tag = format!("{},{}", id.0, id.1);
        push(format!("weights {tag}"), weights(cfg, id))?;
        push(format!("sw {tag}"), sw(cfg, id, false))?;
        push(format!("rho {tag}"), rho(cfg, id, 3, PRINTED))?;
    }
    push("resultant 3,7 1,2".into(), resultant_pair(cfg, (3, 7), 1, 2, false, false))?;
    push("resultant table 3,7".into(), resultant_table(cfg, (3, 7), deep))?;
    push("reduce 3,7".into(), reduce(cfg, (3, 7), 4, 5))?;
    for id in SUITE_CURVES {
        let tag = format!("{},{}", id.0, id.1);
        push(format!("verify {tag}"), verify(cfg, id, "all", 5))?;
        push(format!("hirota {tag}"), hirota(cfg, id, 20))?;
        push(format!("boussinesq {tag}"), boussinesq(cfg, id, 5))?;
    }
    push("addition 3,7".into(), addition(cfg, (3, 7), 10))?;
    for id in INVERSION_CURVES {
        push(format!("invert {},{}", id.0, id.1), invert(cfg, id, 5))?;
    }
    push("rank 3,7".into(), rank(cfg, (3, 7), 80))?;

    let passed = sections.iter().all(|(_, o)| o.passed);
    let mut text = String::new();
    for (name, o) in &sections {
        let _ = writeln!(text, "{} {name}", status(o.passed));
    }
    let _ = writeln!(text, "{}", if passed { "all sections pass" } else { "some sections failed" });
    let json_sections: Vec<Value> = sections
        .iter()
        .map(|(name, o)| json!({"name": name, "status": status(o.passed), "report": o.json}))
        .collect();
    Ok(Outcome {
        json: json!({"schema": REPORT_SCHEMA, "seed": cfg.seed, "deep": deep, "sections": json_sections, "passed": passed}),
        text,
        passed,
    })
}
