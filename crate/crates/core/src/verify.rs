//! Relation suites, the Boussinesq constant, the addition formula and numeric
//! Jacobi inversion, all checked at λ = 0 and reported as serializable structs.

use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::rational::{self, Rational};
use crate::algebra::roots::{self, find_roots, CFloat, Float};
use crate::algebra::{Poly, Var};
use crate::curve::CurveModel;
use crate::error::{Error, Result};
use crate::eval::{evaluate_two_point, max_abs, q_expansion, sample_regular_point, AbelianValues, SigmaModel};
use crate::kleinian::{at_lambda_zero, differentiate_symbolic, InversionPair};

/// Version of every JSON report emitted by this module.
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationResult {
    pub id: String,
    pub weight: Option<i64>,
    pub status: Status,
    /// Largest absolute value over the sample points, as an exact rational.
    pub residual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub suite: String,
    pub curve: String,
    pub seed: u64,
    pub points: Vec<Vec<String>>,
    pub resampled: usize,
    pub relations: Vec<RelationResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.relations.iter().all(|r| r.status == Status::Pass)
    }
}

fn fmt_point(p: &[Rational]) -> Vec<String> {
    p.iter().map(rational::format).collect()
}

/// Data groups making up a named suite.
pub fn suite_groups(curve: &CurveModel, suite: &str) -> Result<Vec<String>> {
    let mut groups: Vec<&str> = match (curve.n, curve.s, suite) {
        (3, 7, "q-relations") => vec!["q4", "q6"],
        (3, 8, "q-relations") => vec!["q4"],
        (3, 7, "all") => vec!["q4", "q6", "bous", "quadratic", "bilinear"],
        (3, 8, "all") => vec!["q4", "bous"],
        (_, _, other) => vec![other],
    };
    groups.retain(|g| !g.is_empty());
    for g in &groups {
        if curve.pack.group(g).is_none() {
            return Err(Error::usage(format!("curve {} has no relation group or suite '{g}'", curve.id())));
        }
    }
    Ok(groups.into_iter().map(String::from).collect())
}

/// Suite names accepted by [`verify_relation_suite`] for this curve.
pub fn available_suites(curve: &CurveModel) -> Vec<String> {
    let mut out = Vec::new();
    if matches!((curve.n, curve.s), (3, 7) | (3, 8)) {
        out.push("all".to_string());
        out.push("q-relations".to_string());
    }
    for g in ["q4", "q6", "bous", "quadratic", "bilinear", "reduced"] {
        if curve.pack.group(g).is_some() {
            out.push(g.to_string());
        }
    }
    out
}

/// Seeded points off the theta divisor, with the number of rejected draws.
pub fn sample_points(model: &SigmaModel, count: usize, seed: u64) -> Result<(Vec<Vec<Rational>>, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(count);
    let mut rejected = 0;
    for _ in 0..count {
        let (p, r) = sample_regular_point(model, &mut rng)?;
        rejected += r;
        pts.push(p);
    }
    Ok((pts, rejected))
}

/// Evaluate every relation of a suite, λ-terms dropped, at seeded points.
pub fn verify_relation_suite(
    curve: &CurveModel,
    model: &SigmaModel,
    suite: &str,
    num_points: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let groups = suite_groups(curve, suite)?;
    let (points, resampled) = sample_points(model, num_points, seed)?;
    let mut values: Vec<AbelianValues> = points
        .iter()
        .map(|p| AbelianValues::new(model, p))
        .collect::<Result<_>>()?;
    let mut relations = Vec::new();
    for g in &groups {
        let group = curve.pack.require_group(g)?;
        for (name, rel) in group.iter() {
            let weight = rel.is_homogeneous()?;
            let rel0 = at_lambda_zero(rel);
            let mut residuals = Vec::with_capacity(values.len());
            for v in values.iter_mut() {
                residuals.push(v.evaluate(&rel0)?);
            }
            let worst = max_abs(&residuals);
            relations.push(RelationResult {
                id: format!("{g}/{name}"),
                weight,
                status: Status::of(worst.is_zero()),
                residual: rational::format(&worst),
            });
        }
    }
    Ok(VerificationReport {
        schema: REPORT_SCHEMA,
        suite: suite.to_string(),
        curve: curve.id(),
        seed,
        points: points.iter().map(|p| fmt_point(p)).collect(),
        resampled,
        relations,
    })
}

/// Compare operator-defined Q values with their ℘ expansions on the given index sets.
pub fn hirota_consistency(
    curve: &CurveModel,
    model: &SigmaModel,
    index_sets: &[Vec<u8>],
    num_points: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let (points, resampled) = sample_points(model, num_points, seed)?;
    let mut relations = Vec::new();
    let mut values: Vec<AbelianValues> = points
        .iter()
        .map(|p| AbelianValues::new(model, p))
        .collect::<Result<_>>()?;
    for idx in index_sets {
        let exp = q_expansion(idx, Some(&curve.scheme))?;
        let mut residuals = Vec::new();
        for v in values.iter_mut() {
            residuals.push(v.q(idx)? - v.evaluate(&exp)?);
        }
        let worst = max_abs(&residuals);
        let id: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
        relations.push(RelationResult {
            id: format!("Q[{}]", id.join(",")),
            weight: exp.is_homogeneous()?,
            status: Status::of(worst.is_zero()),
            residual: rational::format(&worst),
        });
    }
    Ok(VerificationReport {
        schema: REPORT_SCHEMA,
        suite: "hirota".to_string(),
        curve: curve.id(),
        seed,
        points: points.iter().map(|p| fmt_point(p)).collect(),
        resampled,
        relations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoussinesqReport {
    pub schema: u32,
    pub curve: String,
    pub seed: u64,
    /// `c` in `Q_gggg = c ℘_{g-1,g-1}`, when the ratio is the same at every point.
    pub constant: Option<String>,
    pub relation: String,
    /// Largest value of the relation differentiated twice in `u_g`.
    pub residual: String,
    pub points: Vec<Vec<String>>,
}

impl BoussinesqReport {
    pub fn passed(&self) -> bool {
        self.constant.is_some() && self.residual == "0"
    }
}

/// Fit `c` in `Q_gggg = c ℘_{g-1,g-1}` and differentiate the `℘_gggg` relation
/// twice in `u_g`.
pub fn boussinesq_check(curve: &CurveModel, model: &SigmaModel, num_points: usize, seed: u64) -> Result<BoussinesqReport> {
    let g = curve.genus as u8;
    let group = curve.pack.require_group("bous")?;
    let (name, rel) = group
        .iter()
        .find(|(name, _)| name.starts_with("m4_"))
        .ok_or_else(|| Error::usage(format!("curve {} has no weight -4 relation in 'bous'", curve.id())))?;
    let d2 = at_lambda_zero(&differentiate_symbolic(&differentiate_symbolic(rel, g)?, g)?);
    let (points, _) = sample_points(model, num_points, seed)?;
    let mut ratios = Vec::new();
    let mut residuals = Vec::new();
    for p in &points {
        let mut v = AbelianValues::new(model, p)?;
        let q = v.q(&[g, g, g, g])?;
        let pp = v.p(&[g - 1, g - 1])?;
        if !pp.is_zero() {
            ratios.push(q / pp);
        }
        residuals.push(v.evaluate(&d2)?);
    }
    let constant = match ratios.first() {
        Some(c) if ratios.iter().all(|r| r == c) => Some(rational::format(c)),
        _ => None,
    };
    Ok(BoussinesqReport {
        schema: REPORT_SCHEMA,
        curve: curve.id(),
        seed,
        constant,
        relation: name.to_string(),
        residual: rational::format(&max_abs(&residuals)),
        points: points.iter().map(|p| fmt_point(p)).collect(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AdditionCase {
    pub u: Vec<String>,
    pub v: Vec<String>,
    pub lhs: String,
    pub rhs: String,
    pub status: Status,
    /// On failure, the largest contributions of individual monomials to the right side.
    pub contributions: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdditionReport {
    pub schema: u32,
    pub curve: String,
    pub seed: u64,
    pub cases: Vec<AdditionCase>,
}

impl AdditionReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.status == Status::Pass)
    }
}

/// Seeded pairs `(u, v)` with σ nonzero at both.
pub fn addition_pairs(model: &SigmaModel, count: usize, seed: u64) -> Result<Vec<(Vec<Rational>, Vec<Rational>)>> {
    let (pts, _) = sample_points(model, 2 * count, seed)?;
    Ok(pts.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect())
}

/// `-σ(u+v)σ(u-v)/(σ(u)²σ(v)²) = P(u,v) + P(v,u)` for the two-point polynomial
/// `P` named `P32` in the curve's `addition` group.
pub fn verify_addition(
    curve: &CurveModel,
    model: &SigmaModel,
    pairs: &[(Vec<Rational>, Vec<Rational>)],
    seed: u64,
) -> Result<AdditionReport> {
    let p32 = at_lambda_zero(curve.pack.formula("addition", "P32")?);
    let mut cases = Vec::new();
    for (u, v) in pairs {
        let sum: Vec<Rational> = u.iter().zip(v).map(|(a, b)| a + b).collect();
        let diff: Vec<Rational> = u.iter().zip(v).map(|(a, b)| a - b).collect();
        let su = model.value_at(u);
        let sv = model.value_at(v);
        if su.is_zero() || sv.is_zero() {
            return Err(Error::Divisor("σ vanishes at one point of the pair".into()));
        }
        let lhs = -(model.value_at(&sum) * model.value_at(&diff)) / (&su * &su * &sv * &sv);
        let mut au = AbelianValues::new(model, u)?;
        let mut av = AbelianValues::new(model, v)?;
        let rhs = evaluate_two_point(&p32, &mut au, &mut av)? + evaluate_two_point(&p32, &mut av, &mut au)?;
        let ok = lhs == rhs;
        let mut contributions = Vec::new();
        if !ok {
            let mut parts = Vec::new();
            for (m, c) in p32.terms() {
                let single = Poly::monomial(p32.registry(), m.clone(), c.clone());
                let val = evaluate_two_point(&single, &mut au, &mut av)?
                    + evaluate_two_point(&single, &mut av, &mut au)?;
                parts.push((p32.format_monomial(m), val));
            }
            parts.sort_by(|a, b| b.1.abs().cmp(&a.1.abs()).then_with(|| a.0.cmp(&b.0)));
            contributions = parts
                .into_iter()
                .take(10)
                .map(|(m, v)| (m, rational::format(&v)))
                .collect();
        }
        cases.push(AdditionCase {
            u: fmt_point(u),
            v: fmt_point(v),
            lhs: rational::format(&lhs),
            rhs: rational::format(&rhs),
            status: Status::of(ok),
            contributions,
        });
    }
    Ok(AdditionReport {
        schema: REPORT_SCHEMA,
        curve: curve.id(),
        seed,
        cases,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisorPoint {
    pub z: String,
    pub w: String,
    pub residual: String,
}

#[derive(Clone, Debug)]
pub struct InversionResult {
    pub u: Vec<Rational>,
    pub z: Vec<CFloat>,
    pub w: Vec<CFloat>,
    pub residuals: Vec<Float>,
    /// `|Σ z_i + c_{g-1}/c_g|`.
    pub vieta_error: Float,
    pub digits: u32,
}

impl InversionResult {
    pub fn max_residual(&self) -> Float {
        self.residuals
            .iter()
            .cloned()
            .fold(roots::float_zero(roots::bits_for_digits(self.digits)), |a, b| if b > a { b } else { a })
    }
}

fn cpow(z: &CFloat, e: u32, bits: usize) -> CFloat {
    let mut acc = CFloat::new(roots::float_one(bits), roots::float_zero(bits));
    for _ in 0..e {
        acc = &acc * z;
    }
    acc
}

fn to_cfloat(r: &Rational, bits: usize) -> CFloat {
    CFloat::new(roots::float_from_rational(r, bits), roots::float_zero(bits))
}

/// Rational coefficients in `z` (lowest first) of a `z`-polynomial in ℘ symbols.
fn z_coefficients(p: &Poly, values: &mut AbelianValues) -> Result<Vec<Rational>> {
    match p.registry().index_of(&Var::Z) {
        Some(zi) => p.coefficients_in(zi).iter().map(|c| values.evaluate(c)).collect(),
        None => Ok(vec![values.evaluate(p)?]),
    }
}

/// Divisor points `(z_i, w_i)` with `u = Σ ∫ du` from `ρ_{1,2}` and `ρ_1` at λ = 0.
pub fn jacobi_invert_numeric(
    curve: &CurveModel,
    pair: &InversionPair,
    model: &SigmaModel,
    u0: &[Rational],
    digits: u32,
) -> Result<InversionResult> {
    let mut values = AbelianValues::new(model, u0)?;
    let g = curve.genus;
    let bits = roots::bits_for_digits(digits) + 32;
    let c = z_coefficients(&at_lambda_zero(&pair.rho12), &mut values)?;
    if c.len() != g + 1 || c[g].is_zero() {
        return Err(Error::Divisor("ρ_(1,2) drops degree at this point".into()));
    }
    let zs = find_roots(&c, digits)?;
    let rho1 = at_lambda_zero(&pair.rho1);
    let wi = rho1
        .registry()
        .index_of(&Var::W)
        .ok_or_else(|| Error::internal("ρ_1 does not involve w"))?;
    let by_w = rho1.coefficients_in(wi);
    if by_w.len() != 2 {
        return Err(Error::internal("ρ_1 is not linear in w"));
    }
    let a: Vec<CFloat> = z_coefficients(&by_w[0], &mut values)?.iter().map(|r| to_cfloat(r, bits)).collect();
    let b: Vec<CFloat> = z_coefficients(&by_w[1], &mut values)?.iter().map(|r| to_cfloat(r, bits)).collect();
    let tiny = roots::float_pow10_neg(digits / 2, bits);
    let one = roots::float_one(bits);
    let mut out_z = Vec::new();
    let mut out_w = Vec::new();
    let mut residuals = Vec::new();
    for root in &zs {
        let z = &root.value;
        let bz = roots::eval(&b, z);
        let scale = roots::abs(z).max(one.clone()).powi((b.len() as i64).into());
        if roots::abs(&bz) <= &tiny * scale {
            return Err(Error::Divisor("the w-coefficient of ρ_1 vanishes at a root".into()));
        }
        let w = -(roots::eval(&a, z) / bz);
        let zs_pow = cpow(z, curve.s, bits);
        let lhs = cpow(&w, curve.n, bits) - &zs_pow;
        let denom = roots::abs(&zs_pow).max(one.clone());
        residuals.push(roots::abs(&lhs) / denom);
        out_z.push(z.clone());
        out_w.push(w);
    }
    let mut sum = CFloat::new(roots::float_zero(bits), roots::float_zero(bits));
    for z in &out_z {
        sum = &sum + z;
    }
    let expected = to_cfloat(&(-&c[g - 1] / &c[g]), bits);
    let vieta_error = roots::abs(&(sum - expected));
    Ok(InversionResult {
        u: u0.to_vec(),
        z: out_z,
        w: out_w,
        residuals,
        vieta_error,
        digits,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InversionSample {
    pub u: Vec<String>,
    pub points: Vec<DivisorPoint>,
    pub max_residual: String,
    pub vieta_error: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct InversionReport {
    pub schema: u32,
    pub curve: String,
    pub seed: u64,
    pub digits: u32,
    /// Pass threshold for the relative on-curve residual.
    pub tolerance: String,
    pub samples: Vec<InversionSample>,
    pub max_residual: String,
    pub resampled: usize,
    pub passed: bool,
}

fn fmt_c(z: &CFloat, digits: u32) -> String {
    let sign = if z.im.is_negative() { "-" } else { "+" };
    format!(
        "{} {} {}i",
        roots::format_float(&z.re, digits),
        sign,
        roots::format_float(&z.im.abs(), digits)
    )
}

/// Scientific rendering of a nonnegative residual.
pub fn format_residual(x: &Float) -> String {
    format!("{:.3e}", x.to_f64().value())
}

/// Decimal exponent of the pass threshold for a given working precision.
pub fn residual_exponent(digits: u32) -> u32 {
    digits / 2
}

/// Invert at `count` seeded points, resampling points where the divisor is degenerate.
pub fn inversion_report(
    curve: &CurveModel,
    pair: &InversionPair,
    model: &SigmaModel,
    count: usize,
    seed: u64,
    digits: u32,
) -> Result<InversionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bits = roots::bits_for_digits(digits);
    let exp = residual_exponent(digits);
    let tol = roots::float_pow10_neg(exp, bits);
    let mut samples = Vec::new();
    let mut resampled = 0;
    let mut worst = roots::float_zero(bits);
    let mut passed = true;
    while samples.len() < count {
        let (u, r) = sample_regular_point(model, &mut rng)?;
        resampled += r;
        let res = match jacobi_invert_numeric(curve, pair, model, &u, digits) {
            Ok(res) => res,
            Err(Error::Divisor(msg)) => {
                log::info!("resampling: {msg}");
                resampled += 1;
                if resampled > 100 {
                    return Err(Error::internal("too many degenerate sample points"));
                }
                continue;
            }
            Err(e) => return Err(e),
        };
        let m = res.max_residual();
        let vieta_tol = roots::float_pow10_neg(exp, bits)
            * res.z.iter().map(roots::abs).fold(roots::float_one(bits), |a, b| a.max(b));
        passed &= m < tol && res.vieta_error < vieta_tol;
        if m > worst {
            worst = m.clone();
        }
        samples.push(InversionSample {
            u: fmt_point(&u),
            points: res
                .z
                .iter()
                .zip(&res.w)
                .zip(&res.residuals)
                .map(|((z, w), r)| DivisorPoint {
                    z: fmt_c(z, 20.min(digits)),
                    w: fmt_c(w, 20.min(digits)),
                    residual: format_residual(r),
                })
                .collect(),
            max_residual: format_residual(&m),
            vieta_error: format_residual(&res.vieta_error),
        });
    }
    Ok(InversionReport {
        schema: REPORT_SCHEMA,
        curve: curve.id(),
        seed,
        digits,
        tolerance: format!("1e-{exp}"),
        samples,
        max_residual: format_residual(&worst),
        resampled,
        passed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RankReport {
    pub schema: u32,
    pub curve: String,
    pub seed: u64,
    pub functions: usize,
    pub points: usize,
    pub rank: usize,
}

/// Exact rank of the basis functions evaluated at λ = 0 sample points.
pub fn basis_rank_report(curve: &CurveModel, model: &SigmaModel, num_points: usize, seed: u64) -> Result<RankReport> {
    let basis = curve.pack.require_group("basis")?;
    let fns: Vec<Poly> = basis.iter().map(|(_, p)| at_lambda_zero(p)).collect();
    let (points, _) = sample_points(model, num_points, seed)?;
    let mut rows = Vec::with_capacity(points.len());
    for p in &points {
        let mut v = AbelianValues::new(model, p)?;
        rows.push(fns.iter().map(|f| v.evaluate(f)).collect::<Result<Vec<Rational>>>()?);
    }
    let rank = crate::algebra::linalg::rank(&rows);
    Ok(RankReport {
        schema: REPORT_SCHEMA,
        curve: curve.id(),
        seed,
        functions: fns.len(),
        points: points.len(),
        rank,
    })
}

/// `1` if `x` is a rational one, used to print ratios compactly.
pub fn is_unit(x: &Rational) -> bool {
    x.is_one()
}
