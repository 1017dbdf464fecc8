//! Exact sparse algebra over the twelve torus variables.
//!
//! Triangle-tree vertices map to integer polynomials in the variables
//! `x[q,r,s]` indexed by [`TypeIndex`]. A vertex polynomial is a sum
//! `c_0 P_0 + ... + c_m P_m` where the `P_i` form a monomial chain (each
//! `P_i` extends `P_{i-1}` by one variable) and the coefficients come from
//! the vertex's proper forward/turn code. Evaluating at a point of the unit
//! torus places the vertex in the plane.
//!
//! Exponents are stored in half-steps (the value 2 means `x^1`) so that
//! square roots of variables, which appear as symmetry centers in the
//! palindromicity predicates, stay integral.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::encoding::{
    covering_label, edge_role, prefix_types, proper_node_of, qr_encode, type_of, Corner, EdgeRole,
    QrCode, SConvention, TypeIndex, VertexLabel,
};
use crate::torus::TorusPoint;

fn exp_add(a: i16, b: i16) -> i16 {
    a.checked_add(b).expect("monomial exponent overflow")
}

fn coeff_add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("polynomial coefficient overflow")
}

fn coeff_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("polynomial coefficient overflow")
}

/// Product of powers of the twelve variables, exponents in half-steps.
/// Negative exponents (Laurent monomials) are allowed.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    half: [i16; TypeIndex::COUNT],
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            half: [0; TypeIndex::COUNT],
        }
    }

    /// The variable `x_i`.
    pub fn var(i: TypeIndex) -> Self {
        let mut half = [0; TypeIndex::COUNT];
        half[i.dense()] = 2;
        Monomial { half }
    }

    /// The half-step `sqrt(x_i)`.
    pub fn sqrt_var(i: TypeIndex) -> Self {
        let mut half = [0; TypeIndex::COUNT];
        half[i.dense()] = 1;
        Monomial { half }
    }

    pub fn half_exponents(&self) -> &[i16; TypeIndex::COUNT] {
        &self.half
    }

    pub fn is_one(&self) -> bool {
        self.half.iter().all(|&e| e == 0)
    }

    /// Whole, non-negative exponents only.
    pub fn is_ordinary(&self) -> bool {
        self.half.iter().all(|&e| e >= 0 && e % 2 == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut half = self.half;
        for (e, o) in half.iter_mut().zip(other.half) {
            *e = exp_add(*e, o);
        }
        Monomial { half }
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        let mut half = self.half;
        for (e, o) in half.iter_mut().zip(other.half) {
            *e = exp_add(*e, -o);
        }
        Monomial { half }
    }

    /// Total degree doubled, i.e. in half-step units.
    pub fn degree_x2(&self) -> i32 {
        self.half.iter().map(|&e| e as i32).sum()
    }

    /// Total degree of an ordinary monomial.
    pub fn degree(&self) -> i32 {
        debug_assert!(self.degree_x2() % 2 == 0);
        self.degree_x2() / 2
    }

    pub fn eval(&self, x: &TorusPoint) -> Complex64 {
        let mut phase = 0.0;
        for (i, &e) in self.half.iter().enumerate() {
            if e != 0 {
                phase += x.angles()[i] * (e as f64) * 0.5;
            }
        }
        Complex64::from_polar(1.0, phase)
    }

    /// Exponent of `y_k` after the collapse `x[q,r,s] -> y_s`.
    fn collapse(&self) -> [u16; 3] {
        debug_assert!(self.is_ordinary());
        let mut out = [0u16; 3];
        for (i, &e) in self.half.iter().enumerate() {
            let t = TypeIndex::from_dense(i).unwrap();
            out[t.s() as usize] += (e / 2) as u16;
        }
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &e) in self.half.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            let t = TypeIndex::from_dense(i).unwrap();
            write!(f, "x[{t}]")?;
            if e == 2 {
                // exponent one, no suffix
            } else if e % 2 == 0 {
                write!(f, "^{}", e / 2)?;
            } else {
                write!(f, "^({e}/2)")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial({self})")
    }
}

/// The monomial `M^2 / L`, the mirror image of `L` around `M`.
pub fn symmetric_monomial(l: &Monomial, m: &Monomial) -> Monomial {
    m.mul(m).div(l)
}

/// Sparse integer polynomial in the twelve variables, kept in canonical
/// form (zero coefficients never stored, terms ordered by exponent vector).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, i64>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: i64) -> Self {
        let mut p = Polynomial::default();
        p.add_term(c, Monomial::one());
        p
    }

    pub fn from_term(c: i64, m: Monomial) -> Self {
        let mut p = Polynomial::default();
        p.add_term(c, m);
        p
    }

    pub fn add_term(&mut self, c: i64, m: Monomial) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(m).or_insert(0);
        *entry = coeff_add(*entry, c);
        if *entry == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    /// The term of maximal total degree, ties broken by exponent order.
    pub fn leading(&self) -> Option<(i64, Monomial)> {
        self.terms
            .iter()
            .max_by_key(|(m, _)| (m.degree_x2(), **m))
            .map(|(m, &c)| (c, *m))
    }

    /// `Some((c, m))` when the polynomial is exactly one term.
    pub fn single_term(&self) -> Option<(i64, Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, &c)| (c, *m))
        } else {
            None
        }
    }

    pub fn scaled(&self, k: i64) -> Polynomial {
        if k == 0 {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (*m, coeff_mul(c, k)))
                .collect(),
        }
    }

    /// `Some(k)` when `self == k * other`. The zero polynomial is `0 * other`
    /// for nonzero `other`.
    pub fn exact_multiple_of(&self, other: &Polynomial) -> Option<i64> {
        let (probe_mono, probe_coeff) = other.terms.iter().next().map(|(m, &c)| (*m, c))?;
        let mine = self.coeff(&probe_mono);
        if mine % probe_coeff != 0 {
            return None;
        }
        let k = mine / probe_coeff;
        (*self == other.scaled(k)).then_some(k)
    }

    pub fn eval(&self, x: &TorusPoint) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in self.terms() {
            acc += m.eval(x) * (c as f64);
        }
        acc
    }

    pub fn collapse(&self) -> TrivariatePoly {
        let mut out = TrivariatePoly::default();
        for (m, c) in self.terms() {
            out.add_term(c, m.collapse());
        }
        out
    }
}

impl core::ops::Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(c, *m);
        }
        out
    }
}

impl core::ops::Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(-c, *m);
        }
        out
    }
}

impl core::ops::Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in self.terms() {
            for (mb, cb) in rhs.terms() {
                out.add_term(coeff_mul(ca, cb), ma.mul(mb));
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    /// Canonical text form: terms by descending total degree (exponent
    /// order breaking ties), `c*` prefixes for coefficients other than one,
    /// e.g. `x[0,0,0]^2*x[1,0,1] + 2*x[0,0,0]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<(&Monomial, i64)> = self.terms().collect();
        terms.sort_by(|a, b| (b.0.degree_x2(), b.0).cmp(&(a.0.degree_x2(), a.0)));
        for (i, (m, c)) in terms.iter().enumerate() {
            let mag = c.unsigned_abs();
            if i == 0 {
                if *c < 0 {
                    f.write_str("-")?;
                }
            } else if *c < 0 {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

/// A vertex's exact image: coefficients indexed by total degree along the
/// monomial chain of its proper code. Degree-`i` coefficient may be zero;
/// there is never more than one monomial per total degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VertexPoly {
    terms: Vec<(i64, Monomial)>,
}

impl VertexPoly {
    /// Chain length `m`; the polynomial has `m + 1` slots.
    pub fn chain_degree(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn terms(&self) -> &[(i64, Monomial)] {
        &self.terms
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let mut p = Polynomial::zero();
        for &(c, m) in &self.terms {
            p.add_term(c, m);
        }
        p
    }

    pub fn eval(&self, x: &TorusPoint) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(c, m) in &self.terms {
            if c != 0 {
                acc += m.eval(x) * (c as f64);
            }
        }
        acc
    }

    pub fn collapse(&self) -> TrivariatePoly {
        self.to_polynomial().collapse()
    }
}

impl fmt::Display for VertexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_polynomial().fmt(f)
    }
}

/// The monomial chain of a code: `P_0 = 1` and `P_i` multiplies `P_{i-1}`
/// by the variable of the node encoded by the length-`i-1` prefix.
pub fn p_chain(code: &QrCode, conv: SConvention) -> Vec<Monomial> {
    let types = prefix_types(code, conv);
    let mut out = Vec::with_capacity(code.m() + 1);
    let mut p = Monomial::one();
    out.push(p);
    for i in 1..=code.m() {
        p = p.mul(&Monomial::var(types[i - 1]));
        out.push(p);
    }
    out
}

/// The exact image of a vertex: `sum (q_i + rho_{i+1}) P_i` over the proper
/// code of `v`, reading `q_0 = 0` and `rho_{m+1} = 0`.
pub fn psi_of_vertex(v: &VertexLabel, conv: SConvention) -> VertexPoly {
    let node = proper_node_of(v);
    let code = qr_encode(&node);
    debug_assert!(code.is_proper());
    let m = code.m();
    let chain = p_chain(&code, conv);
    let q = code.q();
    let rho = code.rho();
    let mut terms = Vec::with_capacity(m + 1);
    for (i, p) in chain.into_iter().enumerate() {
        let qi = if i == 0 { 0 } else { q[i - 1] as i64 };
        let rnext = if i < m { rho[i] as i64 } else { 0 };
        terms.push((qi + rnext, p));
    }
    VertexPoly { terms }
}

/// Convenience wrapper returning the canonical polynomial directly.
pub fn psi_polynomial(v: &VertexLabel, conv: SConvention) -> Polynomial {
    psi_of_vertex(v, conv).to_polynomial()
}

/// Integer polynomial in `y_0, y_1, y_2`, the image of the twelve-variable
/// algebra under `x[q,r,s] -> y_s`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TrivariatePoly {
    terms: BTreeMap<[u16; 3], i64>,
}

impl TrivariatePoly {
    pub fn zero() -> Self {
        TrivariatePoly::default()
    }

    pub fn add_term(&mut self, c: i64, exps: [u16; 3]) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(exps).or_insert(0);
        *entry = coeff_add(*entry, c);
        if *entry == 0 {
            self.terms.remove(&exps);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ([u16; 3], i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    /// Whether the polynomial climbs the variables `y_0, y_1, y_2`: its
    /// monomials lie on a single ladder that multiplies one variable per
    /// degree step, starting from `y_0` and changing variable between
    /// runs, with nonzero coefficients confined to the top two rungs of
    /// each variable run. Coefficients must be non-negative and no two
    /// monomials may share a total degree. Constants (and the zero
    /// polynomial) pass as degenerate cases.
    pub fn is_ascending(&self) -> bool {
        if self.terms.values().any(|&c| c < 0) {
            return false;
        }
        let mut by_degree: BTreeMap<u32, [u16; 3]> = BTreeMap::new();
        for (e, _) in self.terms() {
            let d = e.iter().map(|&v| v as u32).sum::<u32>();
            if by_degree.insert(d, e).is_some() {
                return false;
            }
        }
        let Some((&top, _)) = by_degree.last_key_value() else {
            return true;
        };
        if top == 0 {
            return true;
        }
        let supp: Vec<Option<[u16; 3]>> = (0..=top).map(|d| by_degree.get(&d).copied()).collect();
        ladder_dfs(&supp, 0, [0, 0, 0], 0, true)
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&v| v as u32).sum())
            .max()
            .unwrap_or(0)
    }
}

/// Searches for a run decomposition of the ladder from `deg` upward.
/// `supp[d]` is the unique support monomial of total degree `d`, if any.
fn ladder_dfs(supp: &[Option<[u16; 3]>], deg: usize, mono: [u16; 3], var: usize, first: bool) -> bool {
    let top = supp.len() - 1;
    // First support rung strictly above deg; the run may not strictly
    // enclose it below its top two rungs.
    let s1 = (deg + 1..=top)
        .find(|&d| supp[d].is_some())
        .expect("top rung always has support");
    let max_a = (s1 - deg + 1).min(top - deg);
    let mut mono = mono;
    for a in 1..=max_a {
        let below = mono;
        mono[var] += 1;
        let rung = deg + a;
        // the constant term sits below the top two rungs of any first run
        // longer than one step
        if first && a >= 2 && supp[0].is_some() {
            return false;
        }
        // support one rung below the top must lie on the ladder too
        if a >= 2 && supp[rung - 1].is_some_and(|sm| sm != below) {
            return false;
        }
        if supp[rung].is_some_and(|sm| sm != mono) {
            continue;
        }
        if rung == top {
            return supp[rung] == Some(mono);
        }
        // the next run may use either of the other two variables
        if ladder_dfs(supp, rung, mono, (var + 1) % 3, false)
            || ladder_dfs(supp, rung, mono, (var + 2) % 3, false)
        {
            return true;
        }
    }
    false
}

impl fmt::Display for TrivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<([u16; 3], i64)> = self.terms().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().map(|&v| v as u32).sum();
            let db: u32 = b.0.iter().map(|&v| v as u32).sum();
            (db, b.0).cmp(&(da, a.0))
        });
        for (i, (e, c)) in terms.iter().enumerate() {
            if i > 0 {
                f.write_str(if *c < 0 { " - " } else { " + " })?;
            } else if *c < 0 {
                f.write_str("-")?;
            }
            let mag = c.unsigned_abs();
            let is_const = e.iter().all(|&v| v == 0);
            if is_const {
                write!(f, "{mag}")?;
                continue;
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            let mut firstv = true;
            for (k, &ev) in e.iter().enumerate() {
                if ev == 0 {
                    continue;
                }
                if !firstv {
                    f.write_str("*")?;
                }
                firstv = false;
                write!(f, "y{k}")?;
                if ev > 1 {
                    write!(f, "^{ev}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TrivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TrivariatePoly({self})")
    }
}

/// Whether `p / m` is real everywhere on the unit torus, decided exactly:
/// every monomial of `p` must carry the same coefficient as its mirror
/// image around `m`.
pub fn is_palindromic_over_monomial(p: &Polynomial, m: &Monomial) -> bool {
    let center2 = m.mul(m);
    p.terms().all(|(l, c)| {
        let partner = center2.div(l);
        p.coeff(&partner) == c
    })
}

/// Whether `p / (m (1 - x_{i1}^{-1}))` is real everywhere on the unit
/// torus: mirror images around `m / sqrt(x_{i1})` must carry opposite
/// coefficients.
pub fn is_antipalindromic_over_binomial(p: &Polynomial, m: &Monomial, i1: TypeIndex) -> bool {
    let center2 = m.mul(m).div(&Monomial::var(i1));
    p.terms().all(|(l, c)| {
        let partner = center2.div(l);
        p.coeff(&partner) == -c
    })
}

/// Exact relation of a vertex image to the line through an edge image.
///
/// Offsets are positions in the edge frame: `psi(v) = psi(w) + k (psi(u) -
/// psi(w))`, so `0` is the `w` endpoint and `1` the `u` endpoint. By
/// construction offsets are integers, never strictly inside `(0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IncidenceVerdict {
    /// The ratio `(psi(v) - psi(w)) / (psi(u) - psi(w))` is non-real on the
    /// torus; the vertex leaves the edge's line almost everywhere.
    NonRealRatio,
    /// Side edge: the vertex sits on the lattice spanned by the edge vector.
    IntegerOffset(i64),
    /// Diagonal edge: same, along the diagonal direction.
    DiagonalOffset(i64),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IncidenceError {
    NotAnEdge,
    /// A real ratio did not reduce to an exact lattice offset. This cannot
    /// happen if the construction is sound; surfacing it beats masking it.
    Contradiction(String),
}

impl fmt::Display for IncidenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IncidenceError::NotAnEdge => f.write_str("vertex pair is not a triangle-tree edge"),
            IncidenceError::Contradiction(why) => write!(f, "incidence contradiction: {why}"),
        }
    }
}

impl core::error::Error for IncidenceError {}

/// Reusable classifier caching vertex polynomials across queries; the
/// exhaustive certificate asks about every vertex against every edge and
/// would otherwise recompute each image thousands of times.
pub struct IncidenceContext {
    conv: SConvention,
    cache: BTreeMap<VertexLabel, Polynomial>,
}

impl IncidenceContext {
    pub fn new(conv: SConvention) -> Self {
        IncidenceContext {
            conv,
            cache: BTreeMap::new(),
        }
    }

    fn psi(&mut self, v: &VertexLabel) -> Polynomial {
        if let Some(p) = self.cache.get(v) {
            return p.clone();
        }
        let p = psi_polynomial(v, self.conv);
        self.cache.insert(v.clone(), p.clone());
        p
    }

    /// Classifies the position of vertex `v` against the edge `(u, w)`.
    ///
    /// The edge's covering role is derived from the labels rather than
    /// taken on trust; side edges use the monomial palindromicity test and
    /// diagonals the binomial one. A real ratio is reduced to its exact
    /// integer offset in the edge frame.
    pub fn classify(
        &mut self,
        v: &VertexLabel,
        u: &VertexLabel,
        w: &VertexLabel,
    ) -> Result<IncidenceVerdict, IncidenceError> {
        let role = edge_role(u, w).map_err(|_| IncidenceError::NotAnEdge)?;
        match role {
            EdgeRole::RootBase
            | EdgeRole::LeftSide(_)
            | EdgeRole::FarSide(_)
            | EdgeRole::RightSide(_) => {
                let dir = &self.psi(u) - &self.psi(w);
                let (eps, pm) = dir.single_term().ok_or_else(|| {
                    IncidenceError::Contradiction(format!(
                        "side edge ({u}, {w}) direction is not a monomial"
                    ))
                })?;
                if eps.abs() != 1 {
                    return Err(IncidenceError::Contradiction(format!(
                        "side edge ({u}, {w}) direction has coefficient {eps}"
                    )));
                }
                let diff = &self.psi(v) - &self.psi(w);
                if !is_palindromic_over_monomial(&diff, &pm) {
                    return Ok(IncidenceVerdict::NonRealRatio);
                }
                let k = diff
                    .exact_multiple_of(&Polynomial::from_term(1, pm))
                    .ok_or_else(|| {
                        IncidenceError::Contradiction(format!(
                            "real ratio of {v} over side ({u}, {w}) is not a lattice offset"
                        ))
                    })?;
                Ok(IncidenceVerdict::IntegerOffset(k * eps))
            }
            EdgeRole::Diagonal(node) => {
                let (short, long) = if u.len() < w.len() { (u, w) } else { (w, u) };
                let psi_long = self.psi(long);
                let base = covering_label(&node, Corner::V0);
                let lead = &psi_long - &self.psi(&base);
                let (c, pm) = lead.single_term().ok_or_else(|| {
                    IncidenceError::Contradiction(format!(
                        "diagonal ({u}, {w}): upper corner offset is not a monomial"
                    ))
                })?;
                if c != 1 {
                    return Err(IncidenceError::Contradiction(format!(
                        "diagonal ({u}, {w}): upper corner offset has coefficient {c}"
                    )));
                }
                let y = type_of(&node, self.conv);
                let diff = &self.psi(v) - &psi_long;
                if !is_antipalindromic_over_binomial(&diff, &pm, y) {
                    return Ok(IncidenceVerdict::NonRealRatio);
                }
                let along = &self.psi(short) - &psi_long;
                let d = diff.exact_multiple_of(&along).ok_or_else(|| {
                    IncidenceError::Contradiction(format!(
                        "real ratio of {v} over diagonal ({u}, {w}) is not a lattice offset"
                    ))
                })?;
                let offset = if w == long { d } else { 1 - d };
                Ok(IncidenceVerdict::DiagonalOffset(offset))
            }
        }
    }
}

/// One-shot form of [`IncidenceContext::classify`].
pub fn classify_incidence(
    v: &VertexLabel,
    u: &VertexLabel,
    w: &VertexLabel,
    conv: SConvention,
) -> Result<IncidenceVerdict, IncidenceError> {
    IncidenceContext::new(conv).classify(v, u, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::sample_torus;
    use crate::truncation::truncate_tstar;
    use alloc::collections::BTreeSet;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    const FIG: SConvention = SConvention::Figure;

    fn lab(s: &str) -> VertexLabel {
        VertexLabel::parse(s).unwrap()
    }

    fn ty(q: u8, r: u8, s: u8) -> TypeIndex {
        TypeIndex::new(q, r, s).unwrap()
    }

    fn x000() -> Monomial {
        Monomial::var(ty(0, 0, 0))
    }

    fn x101() -> Monomial {
        Monomial::var(ty(1, 0, 1))
    }

    fn x102() -> Monomial {
        Monomial::var(ty(1, 0, 2))
    }

    #[test]
    fn chain_examples() {
        let c = QrCode::new(vec![1], vec![0]).unwrap();
        assert_eq!(p_chain(&c, FIG), vec![Monomial::one(), x000()]);

        let c = QrCode::new(vec![1, 1], vec![0, 0]).unwrap();
        assert_eq!(
            p_chain(&c, FIG),
            vec![Monomial::one(), x000(), x000().mul(&x101())]
        );

        let c = QrCode::new(vec![1, 1, 1], vec![0, 0, 0]).unwrap();
        assert_eq!(
            p_chain(&c, FIG),
            vec![
                Monomial::one(),
                x000(),
                x000().mul(&x101()),
                x000().mul(&x101()).mul(&x102())
            ]
        );
    }

    #[test]
    fn psi_worked_vertices() {
        for (label, expected) in crate::validator::golden_vertex_fixtures() {
            assert_eq!(
                psi_polynomial(&label, FIG),
                expected,
                "vertex {label}"
            );
        }
    }

    #[test]
    fn psi_display_matches_canonical_text() {
        assert_eq!(psi_polynomial(&lab("0"), FIG).to_string(), "0");
        assert_eq!(psi_polynomial(&lab("01"), FIG).to_string(), "1");
        assert_eq!(psi_polynomial(&lab("010"), FIG).to_string(), "x[0,0,0]");
        assert_eq!(
            psi_polynomial(&lab("0101001001"), FIG).to_string(),
            "x[0,0,0]*x[1,0,1]*x[1,0,2] + 2*x[0,0,0]*x[1,0,1] + x[0,0,0]"
        );
    }

    #[test]
    fn psi_respects_proper_code_shape() {
        for v in truncate_tstar(5).labels {
            let p = psi_of_vertex(&v, FIG);
            let m = p.chain_degree();
            for (i, (c, mono)) in p.terms().iter().enumerate() {
                assert!(*c >= 0);
                assert_eq!(mono.degree(), i as i32);
            }
            if m > 1 {
                assert!(p.terms()[m].0 > 0, "leading coefficient of {v}");
            }
        }
    }

    #[test]
    fn psi_injective_on_small_labels() {
        let labels: Vec<VertexLabel> = truncate_tstar(4).labels;
        let mut seen = BTreeSet::new();
        for v in &labels {
            let canon: Vec<(Monomial, i64)> = psi_polynomial(v, FIG)
                .terms()
                .map(|(m, c)| (*m, c))
                .collect();
            assert!(seen.insert(canon), "psi collision at {v}");
        }
    }

    #[test]
    fn evaluate_examples() {
        let x = sample_torus(3);
        assert!((Polynomial::constant(1).eval(&x) - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        // a quarter turn on one coordinate
        let mut angles = *x.angles();
        angles[ty(0, 0, 0).dense()] = core::f64::consts::FRAC_PI_2;
        let x2 = TorusPoint::from_angles(angles, 0);
        assert!((x000().eval(&x2) - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn collapse_examples() {
        let p = psi_polynomial(&lab("010"), FIG).collapse();
        assert_eq!(p.to_string(), "y0");

        let mut q = Polynomial::zero();
        q.add_term(1, x000());
        q.add_term(1, x000().mul(&x101()));
        assert_eq!(q.collapse().to_string(), "y0*y1 + y0");

        assert!(Polynomial::zero().collapse().is_zero());
    }

    #[test]
    fn symmetric_monomial_examples() {
        let m = x000();
        assert_eq!(symmetric_monomial(&m, &m), m);
        assert_eq!(symmetric_monomial(&Monomial::one(), &m), m.mul(&m));
        let half = Monomial::sqrt_var(ty(0, 0, 0));
        assert_eq!(symmetric_monomial(&m, &half), Monomial::one());
    }

    #[test]
    fn palindromic_examples() {
        let m = x000();
        let mut p = Polynomial::zero();
        p.add_term(1, m.mul(&m));
        p.add_term(1, Monomial::one());
        assert!(is_palindromic_over_monomial(&p, &m));

        let mut p = Polynomial::zero();
        p.add_term(1, m.mul(&m));
        p.add_term(2, Monomial::one());
        assert!(!is_palindromic_over_monomial(&p, &m));
    }

    #[test]
    fn antipalindromic_examples() {
        let i = ty(0, 0, 0);
        let m = x000();
        // x - 1 over x(1 - x^{-1}) is identically one, hence real
        let mut p = Polynomial::zero();
        p.add_term(1, m);
        p.add_term(-1, Monomial::one());
        assert!(is_antipalindromic_over_binomial(&p, &m, i));

        // x + 1 over x - 1 is non-real
        let mut p = Polynomial::zero();
        p.add_term(1, m);
        p.add_term(1, Monomial::one());
        assert!(!is_antipalindromic_over_binomial(&p, &m, i));
    }

    #[test]
    fn ascending_examples() {
        // collapse of the vertex with code ((1,1),(0,0))
        let mut p = TrivariatePoly::zero();
        p.add_term(1, [1, 0, 0]);
        p.add_term(1, [1, 1, 0]);
        assert!(p.is_ascending());

        let mut p = TrivariatePoly::zero();
        p.add_term(1, [1, 0, 0]);
        p.add_term(1, [0, 0, 1]);
        assert!(!p.is_ascending());

        let one = {
            let mut p = TrivariatePoly::zero();
            p.add_term(1, [0, 0, 0]);
            p
        };
        assert!(one.is_ascending());
        assert!(TrivariatePoly::zero().is_ascending());

        // support strictly inside a run
        let mut p = TrivariatePoly::zero();
        p.add_term(1, [1, 0, 0]);
        p.add_term(1, [3, 0, 0]);
        assert!(!p.is_ascending());

        // negative coefficients never ascend
        let mut p = TrivariatePoly::zero();
        p.add_term(-1, [1, 0, 0]);
        assert!(!p.is_ascending());
    }

    /// Enumerates every ladder polynomial with runs `a_j <= max_a`, at most
    /// `max_m` runs and coefficients up to `max_c`, independently of the
    /// predicate's search. The first run uses `y_0`; each later run uses
    /// either of the other two variables.
    fn enumerate_ascending(max_m: usize, max_a: u16, max_c: i64) -> BTreeSet<Vec<([u16; 3], i64)>> {
        let mut out = BTreeSet::new();
        // run sequences as (variable, length) pairs
        let mut stack: Vec<Vec<(usize, u16)>> = vec![Vec::new()];
        while let Some(runs) = stack.pop() {
            if !runs.is_empty() {
                // coefficient placements: each run may carry a coefficient on
                // its top two rungs; the very top rung must be positive
                let rungs: Vec<(usize, [u16; 3])> = {
                    let mut positions = Vec::new();
                    let mut mono = [0u16; 3];
                    let mut deg = 0usize;
                    for (j, &(var, a)) in runs.iter().enumerate() {
                        for step in 1..=a {
                            mono[var] += 1;
                            deg += 1;
                            if step + 1 >= a {
                                positions.push((deg, mono));
                            }
                        }
                        if a == 1 && j == 0 {
                            positions.push((0, [0, 0, 0]));
                        }
                    }
                    positions
                };
                let top_deg: usize = runs.iter().map(|&(_, a)| a as usize).sum();
                let k = rungs.len();
                let mut counters = vec![0i64; k];
                loop {
                    let mut poly: BTreeMap<[u16; 3], i64> = BTreeMap::new();
                    for (slot, &(deg, mono)) in rungs.iter().enumerate() {
                        let c = counters[slot];
                        if c != 0 {
                            let _ = deg;
                            *poly.entry(mono).or_insert(0) += c;
                        }
                    }
                    let top_mono = rungs
                        .iter()
                        .filter(|(d, _)| *d == top_deg)
                        .map(|(_, m)| *m)
                        .next()
                        .unwrap();
                    if poly.get(&top_mono).copied().unwrap_or(0) > 0 {
                        out.insert(poly.into_iter().collect());
                    }
                    // odometer
                    let mut slot = 0;
                    loop {
                        if slot == k {
                            break;
                        }
                        counters[slot] += 1;
                        if counters[slot] > max_c {
                            counters[slot] = 0;
                            slot += 1;
                        } else {
                            break;
                        }
                    }
                    if slot == k {
                        break;
                    }
                }
            }
            if runs.len() < max_m {
                let vars: &[usize] = match runs.last() {
                    None => &[0],
                    Some(&(last, _)) => match last {
                        0 => &[1, 2],
                        1 => &[0, 2],
                        _ => &[0, 1],
                    },
                };
                for &var in vars {
                    for a in 1..=max_a {
                        let mut next = runs.clone();
                        next.push((var, a));
                        stack.push(next);
                    }
                }
            }
        }
        // constants
        for c in 0..=max_c {
            let mut poly = Vec::new();
            if c != 0 {
                poly.push(([0, 0, 0], c));
            }
            out.insert(poly);
        }
        out
    }

    #[test]
    fn ascending_matches_brute_force_enumeration() {
        let positives = enumerate_ascending(3, 2, 2);
        for poly in &positives {
            let mut p = TrivariatePoly::zero();
            for &(e, c) in poly {
                p.add_term(c, e);
            }
            assert!(p.is_ascending(), "{p} should ascend");
        }
        // every one- or two-term polynomial over small exponents must agree
        // with membership in the enumerated set
        let mut monos = Vec::new();
        for e0 in 0..3u16 {
            for e1 in 0..3u16 {
                for e2 in 0..3u16 {
                    if e0 + e1 + e2 <= 3 {
                        monos.push([e0, e1, e2]);
                    }
                }
            }
        }
        let enumerated = enumerate_ascending(4, 3, 2);
        for (i, &a) in monos.iter().enumerate() {
            for ca in 1..=2i64 {
                let mut p = TrivariatePoly::zero();
                p.add_term(ca, a);
                let canon: Vec<([u16; 3], i64)> = p.terms().collect();
                assert_eq!(p.is_ascending(), enumerated.contains(&canon), "{p}");
                for &b in &monos[i + 1..] {
                    for cb in 1..=2i64 {
                        let mut p = TrivariatePoly::zero();
                        p.add_term(ca, a);
                        p.add_term(cb, b);
                        let canon: Vec<([u16; 3], i64)> = p.terms().collect();
                        assert_eq!(p.is_ascending(), enumerated.contains(&canon), "{p}");
                    }
                }
            }
        }
    }

    #[test]
    fn all_small_vertex_collapses_ascend() {
        for v in truncate_tstar(5).labels {
            let c = psi_of_vertex(&v, FIG).collapse();
            assert!(c.is_ascending(), "{v}: {c}");
        }
    }

    #[test]
    fn classify_trivial_cases() {
        let u = lab("010");
        let w = lab("0101");
        // far side edge of the root node
        assert_eq!(
            classify_incidence(&w, &u, &w, FIG).unwrap(),
            IncidenceVerdict::IntegerOffset(0)
        );
        assert_eq!(
            classify_incidence(&u, &u, &w, FIG).unwrap(),
            IncidenceVerdict::IntegerOffset(1)
        );
        // diagonal of the root node
        let d1 = lab("01");
        let d2 = lab("010");
        assert_eq!(
            classify_incidence(&d2, &d1, &d2, FIG).unwrap(),
            IncidenceVerdict::DiagonalOffset(0)
        );
        assert_eq!(
            classify_incidence(&d1, &d1, &d2, FIG).unwrap(),
            IncidenceVerdict::DiagonalOffset(1)
        );
        assert_eq!(
            classify_incidence(&lab("0"), &lab("010"), &lab("010110"), FIG),
            Err(IncidenceError::NotAnEdge)
        );
    }

    #[test]
    fn adjacent_turn_rhombi_do_not_share_a_line() {
        // the upper corner of the node reached left-then-right would sit on
        // the line of the right child's diagonal for a positive-measure set
        // of samples if the two rhombi shared a variable
        let verdict =
            classify_incidence(&lab("010011"), &lab("0101"), &lab("01011"), FIG).unwrap();
        assert_eq!(verdict, IncidenceVerdict::NonRealRatio);
    }

    #[test]
    fn classify_forward_chain_offsets() {
        // vertices along the forward chain sit on the lattice of the left
        // side of the root: psi values 0, x, 2x, ...
        let verdict = classify_incidence(&lab("01010"), &lab("0"), &lab("010"), FIG).unwrap();
        assert_eq!(verdict, IncidenceVerdict::IntegerOffset(-1));
        let verdict = classify_incidence(&lab("01010"), &lab("010"), &lab("0"), FIG).unwrap();
        assert_eq!(verdict, IncidenceVerdict::IntegerOffset(2));
    }

    #[test]
    fn classify_off_line_vertex() {
        let verdict = classify_incidence(&lab("010"), &lab("0"), &lab("01"), FIG).unwrap();
        assert_eq!(verdict, IncidenceVerdict::NonRealRatio);
    }

    proptest! {
        #[test]
        fn evaluation_is_multiplicative_on_monomials(
            ea in proptest::collection::vec(-3i16..=3, 12),
            eb in proptest::collection::vec(-3i16..=3, 12),
            seed in 0u64..1000,
        ) {
            let a = Monomial { half: <[i16; 12]>::try_from(ea.as_slice()).unwrap() };
            let b = Monomial { half: <[i16; 12]>::try_from(eb.as_slice()).unwrap() };
            let x = sample_torus(seed);
            let lhs = a.mul(&b).eval(&x);
            let rhs = a.eval(&x) * b.eval(&x);
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        #[test]
        fn evaluation_is_a_ring_homomorphism(
            terms_a in proptest::collection::vec((0usize..12, 0i16..3, -4i64..=4), 0..5),
            terms_b in proptest::collection::vec((0usize..12, 0i16..3, -4i64..=4), 0..5),
            seed in 0u64..1000,
        ) {
            let build = |terms: &[(usize, i16, i64)]| {
                let mut p = Polynomial::zero();
                for &(var, exp, c) in terms {
                    let mut half = [0i16; 12];
                    half[var] = exp * 2;
                    p.add_term(c, Monomial { half });
                }
                p
            };
            let (a, b) = (build(&terms_a), build(&terms_b));
            let x = sample_torus(seed);
            let sum = (&a + &b).eval(&x);
            let prod = (&a * &b).eval(&x);
            prop_assert!((sum - (a.eval(&x) + b.eval(&x))).norm() < 1e-9);
            prop_assert!((prod - (a.eval(&x) * b.eval(&x))).norm() < 1e-9);
        }
    }

    #[test]
    fn psi_evaluation_matches_figure_geometry() {
        // the far corner of the root rhombus evaluates to x + 1
        let x = sample_torus(11);
        let expected = x.value(ty(0, 0, 0)) + Complex64::new(1.0, 0.0);
        let got = psi_of_vertex(&lab("0101"), FIG).eval(&x);
        assert!((got - expected).norm() < 1e-12);
    }
}
