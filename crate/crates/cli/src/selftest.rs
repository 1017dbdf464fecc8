//! Self-test suites: encoding bijections, golden vectors, oracle
//! equivalence, ascending checks, palindromicity against a numeric realness
//! oracle, and the exhaustive incidence certificate.

use td13_core::encoding::{
    covering_label, covering_label_closed, host_node_of, proper_node_of, qr_decode, qr_encode,
    Corner, SConvention, TypeIndex,
};
use td13_core::symbolic::{
    is_antipalindromic_over_binomial, is_palindromic_over_monomial, psi_of_vertex, psi_polynomial,
    IncidenceVerdict, Monomial, Polynomial,
};
use td13_core::torus::{sample_torus, SplitMix64, TorusPoint};
use td13_core::truncation::{labels_up_to, nodes_to_depth, truncate_tstar};
use td13_core::validator::{golden_vertex_fixtures, symbolic_certificate, GeometricOracle};
use td13_core::Complex64;

#[derive(Clone, Debug)]
pub struct SelftestConfig {
    pub depth: usize,
    pub seeds: Vec<u64>,
    pub convention: SConvention,
    /// Exhaustive pair classification is quadratic; it runs at this depth
    /// independently of the enumeration depth.
    pub certificate_depth: usize,
    pub oracle_polys: usize,
    pub oracle_samples: usize,
    pub tolerance: f64,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            depth: 6,
            seeds: vec![1, 2, 3, 4, 5],
            convention: SConvention::Figure,
            certificate_depth: 5,
            oracle_polys: 50,
            oracle_samples: 200,
            tolerance: 1e-9,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn suite(name: &'static str, outcome: Result<String, String>) -> SuiteResult {
    match outcome {
        Ok(detail) => SuiteResult {
            name,
            passed: true,
            detail,
        },
        Err(detail) => SuiteResult {
            name,
            passed: false,
            detail,
        },
    }
}

pub fn run_all(cfg: &SelftestConfig) -> Vec<SuiteResult> {
    vec![
        suite("encoding-bijections", encoding_bijections(cfg)),
        suite("golden-vectors", golden_vectors(cfg)),
        suite("oracle-equivalence", oracle_equivalence(cfg)),
        suite("ascending", ascending(cfg)),
        suite("palindromicity-oracles", palindromicity_oracles(cfg)),
        suite("incidence-certificate", incidence_certificate(cfg)),
    ]
}

fn encoding_bijections(cfg: &SelftestConfig) -> Result<String, String> {
    let nodes = nodes_to_depth(cfg.depth);
    for node in &nodes {
        if qr_decode(&qr_encode(node)) != *node {
            return Err(format!("code round trip failed at {node}"));
        }
        for corner in [Corner::V2, Corner::V3] {
            if covering_label_closed(node, corner) != Some(covering_label(node, corner)) {
                return Err(format!("closed form disagrees at {node}"));
            }
        }
    }
    let labels = labels_up_to(cfg.depth + 2);
    for v in &labels {
        if !v.is_root_edge_vertex() {
            let (node, corner) = host_node_of(v).map_err(|e| format!("{v}: {e}"))?;
            if covering_label(&node, corner) != *v {
                return Err(format!("host node of {v} does not cover it"));
            }
        }
        let node = proper_node_of(v);
        if !qr_encode(&node).is_proper() || covering_label(&node, Corner::V0) != *v {
            return Err(format!("proper node of {v} is wrong"));
        }
    }
    Ok(format!("{} nodes, {} labels", nodes.len(), labels.len()))
}

fn golden_vectors(cfg: &SelftestConfig) -> Result<String, String> {
    let fixtures = golden_vertex_fixtures();
    for (label, expected) in &fixtures {
        let got = psi_polynomial(label, cfg.convention);
        if got != *expected {
            return Err(format!("vertex {label}: got {got}, fixture says {expected}"));
        }
    }
    Ok(format!("{} fixtures", fixtures.len()))
}

fn oracle_equivalence(cfg: &SelftestConfig) -> Result<String, String> {
    let oracle = GeometricOracle::new(cfg.depth, cfg.convention);
    let mut max_dev = 0.0f64;
    let mut vertices = 0;
    for &seed in &cfg.seeds {
        let x = sample_torus(seed);
        let coords = oracle.coordinates(&x);
        vertices = coords.len();
        for (label, z) in coords {
            let w = psi_of_vertex(&label, cfg.convention).eval(&x);
            max_dev = max_dev.max((z - w).norm());
        }
    }
    if max_dev <= cfg.tolerance {
        Ok(format!(
            "{vertices} vertices x {} seeds, max deviation {max_dev:.2e}",
            cfg.seeds.len()
        ))
    } else {
        Err(format!("max deviation {max_dev:.2e}"))
    }
}

fn ascending(cfg: &SelftestConfig) -> Result<String, String> {
    let labels = truncate_tstar(cfg.depth).labels;
    for v in &labels {
        if !psi_of_vertex(v, cfg.convention).collapse().is_ascending() {
            return Err(format!("collapse of {v} does not ascend"));
        }
    }
    Ok(format!("{} vertices", labels.len()))
}

fn palindromicity_oracles(cfg: &SelftestConfig) -> Result<String, String> {
    let seed = cfg.seeds.first().copied().unwrap_or(1);
    let (pal_bad, anti_bad) = oracle_disagreements(
        cfg.oracle_polys,
        cfg.oracle_samples,
        cfg.tolerance,
        seed,
        6,
    );
    if pal_bad == 0 && anti_bad == 0 {
        Ok(format!(
            "{} polynomials x {} samples per predicate",
            cfg.oracle_polys, cfg.oracle_samples
        ))
    } else {
        Err(format!(
            "{pal_bad} monomial and {anti_bad} binomial disagreements"
        ))
    }
}

fn incidence_certificate(cfg: &SelftestConfig) -> Result<String, String> {
    let report =
        symbolic_certificate(cfg.certificate_depth, cfg.convention).map_err(|e| format!("{e}"))?;
    for case in &report.offset_cases {
        let k = match case.verdict {
            IncidenceVerdict::IntegerOffset(k) | IncidenceVerdict::DiagonalOffset(k) => k,
            IncidenceVerdict::NonRealRatio => unreachable!(),
        };
        if 0 < k && k < 1 {
            return Err(format!(
                "offset strictly inside a segment: {} on ({}, {})",
                case.v, case.u, case.w
            ));
        }
    }
    Ok(format!(
        "depth {}: {} pairs, {} non-real, {} side offsets, {} diagonal offsets",
        report.depth, report.pairs, report.non_real, report.integer_offsets, report.diagonal_offsets
    ))
}

/// The three variables used by the random polynomial generator.
pub fn oracle_variables() -> [TypeIndex; 3] {
    [
        TypeIndex::new(0, 0, 0).unwrap(),
        TypeIndex::new(1, 0, 1).unwrap(),
        TypeIndex::new(0, 1, 2).unwrap(),
    ]
}

fn random_monomial(rng: &mut SplitMix64, vars: &[TypeIndex; 3], max_deg: u32) -> Monomial {
    let mut m = Monomial::one();
    let mut left = max_deg;
    for &v in vars {
        let e = rng.next_below(left as usize + 1) as u32;
        for _ in 0..e {
            m = m.mul(&Monomial::var(v));
        }
        left -= e;
    }
    m
}

fn divisor_of(rng: &mut SplitMix64, m: &Monomial) -> Monomial {
    let mut d = Monomial::one();
    for i in 0..TypeIndex::COUNT {
        let whole = (m.half_exponents()[i] / 2) as usize;
        if whole > 0 {
            let e = rng.next_below(whole + 1);
            for _ in 0..e {
                d = d.mul(&Monomial::var(TypeIndex::from_dense(i).unwrap()));
            }
        }
    }
    d
}

/// A random polynomial, a center monomial, and (for the binomial case) a
/// distinguished variable. Half the draws are symmetric by construction, so
/// both predicate outcomes get exercised.
pub struct OracleCase {
    pub poly: Polynomial,
    pub center: Monomial,
    pub var: TypeIndex,
}

pub fn random_palindromic_case(rng: &mut SplitMix64, max_deg: u32, symmetric: bool) -> OracleCase {
    let vars = oracle_variables();
    let center = {
        // keep the center nontrivial so mirrors spread across degrees
        let mut m = random_monomial(rng, &vars, max_deg / 2);
        if m.is_one() {
            m = Monomial::var(vars[0]);
        }
        m
    };
    let center2 = center.mul(&center);
    let mut poly = Polynomial::zero();
    let terms = 1 + rng.next_below(4);
    for _ in 0..terms {
        let c = 1 + rng.next_below(4) as i64;
        if symmetric {
            let l = divisor_of(rng, &center2);
            poly.add_term(c, l);
            poly.add_term(c, center2.div(&l));
        } else {
            poly.add_term(c, random_monomial(rng, &vars, max_deg));
        }
    }
    OracleCase {
        poly,
        center,
        var: vars[0],
    }
}

pub fn random_antipalindromic_case(
    rng: &mut SplitMix64,
    max_deg: u32,
    symmetric: bool,
) -> OracleCase {
    let vars = oracle_variables();
    let var = vars[rng.next_below(3)];
    let center = {
        let mut m = random_monomial(rng, &vars, max_deg / 2);
        if m.half_exponents()[var.dense()] == 0 {
            m = m.mul(&Monomial::var(var));
        }
        m
    };
    // mirror center squared: center^2 / var
    let mirror2 = center.mul(&center).div(&Monomial::var(var));
    let mut poly = Polynomial::zero();
    let terms = 1 + rng.next_below(4);
    for _ in 0..terms {
        let c = 1 + rng.next_below(4) as i64;
        if symmetric {
            let l = divisor_of(rng, &mirror2);
            poly.add_term(c, l);
            poly.add_term(-c, mirror2.div(&l));
        } else {
            poly.add_term(c, random_monomial(rng, &vars, max_deg));
        }
    }
    OracleCase { poly, center, var }
}

/// Numeric realness over random torus samples: the largest imaginary part
/// of the quotient. Samples too close to the binomial's zero are skipped.
pub fn max_imag_quotient(
    poly: &Polynomial,
    center: &Monomial,
    binomial_var: Option<TypeIndex>,
    samples: usize,
    rng: &mut SplitMix64,
) -> f64 {
    let mut worst = 0.0f64;
    let mut taken = 0;
    while taken < samples {
        let x = sample_torus(rng.next_u64());
        let denom = match binomial_var {
            None => center.eval(&x),
            Some(v) => {
                let xv = x.value(v);
                let factor = Complex64::new(1.0, 0.0) - xv.inv();
                if factor.norm() < 1e-3 {
                    continue; // too close to the removable singularity
                }
                center.eval(&x) * factor
            }
        };
        let q = poly.eval(&x) / denom;
        worst = worst.max(q.im.abs());
        taken += 1;
    }
    worst
}

/// Runs both predicates against the numeric oracle; returns the number of
/// disagreements for the monomial and binomial forms.
pub fn oracle_disagreements(
    polys: usize,
    samples: usize,
    tol: f64,
    seed: u64,
    max_deg: u32,
) -> (usize, usize) {
    let mut rng = SplitMix64::new(seed);
    let mut pal_bad = 0;
    let mut anti_bad = 0;
    for i in 0..polys {
        let case = random_palindromic_case(&mut rng, max_deg, i % 2 == 0);
        let predicted = is_palindromic_over_monomial(&case.poly, &case.center);
        let numeric = max_imag_quotient(&case.poly, &case.center, None, samples, &mut rng) <= tol;
        if predicted != numeric {
            pal_bad += 1;
        }

        let case = random_antipalindromic_case(&mut rng, max_deg, i % 2 == 1);
        let predicted = is_antipalindromic_over_binomial(&case.poly, &case.center, case.var);
        let numeric =
            max_imag_quotient(&case.poly, &case.center, Some(case.var), samples, &mut rng) <= tol;
        if predicted != numeric {
            anti_bad += 1;
        }
    }
    (pal_bad, anti_bad)
}

/// Convenience used by tests: `TorusPoint` sampling through one generator.
pub fn sample_points(count: usize, seed: u64) -> Vec<TorusPoint> {
    let mut rng = SplitMix64::new(seed);
    (0..count).map(|_| sample_torus(rng.next_u64())).collect()
}
