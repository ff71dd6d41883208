//! Small quantum cohomology of `G/P`: quantum Chevalley operators, the full
//! table of 3-point Gromov–Witten invariants, and n-point invariants read off
//! iterated products.
//!
//! Internally classes are indexed in the length basis `τ_w := σ_{w_o w w_o^P}`
//! (codimension `ℓ(w)`); the public API uses the Schubert basis `σ_u` of
//! codimension `dim X^P - ℓ(u)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{solve_unique, Matrix, SolveFailure};
use crate::rational::{as_i64, int, Rational};
use crate::weyl::{format_word, parse_word, ParabolicContext};

/// Exponents `(a_i)` of `q^d = Π q_i^{a_i}`, one per `α_i ∈ S_P`.
pub type Degree = Vec<u32>;

/// A `Z[q]`-linear combination of Schubert classes `σ_u`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QRingElement {
    terms: BTreeMap<(usize, Degree), BigInt>,
}

impl QRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(u: usize, d: Degree, c: BigInt) -> Self {
        let mut e = Self::zero();
        e.add_term(u, d, c);
        e
    }

    pub fn basis(u: usize, n_params: usize) -> Self {
        Self::monomial(u, vec![0; n_params], BigInt::from(1))
    }

    pub fn add_term(&mut self, u: usize, d: Degree, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let key = (u, d);
        let entry = self.terms.entry(key.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&mut self, other: &QRingElement) {
        for ((u, d), c) in &other.terms {
            self.add_term(*u, d.clone(), c.clone());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Degree, &BigInt)> {
        self.terms.iter().map(|((u, d), c)| (*u, d, c))
    }

    pub fn coefficient(&self, u: usize, d: &[u32]) -> BigInt {
        self.terms
            .get(&(u, d.to_vec()))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplies every term by `q^d`.
    pub fn shift(&self, d: &[u32]) -> QRingElement {
        QRingElement {
            terms: self
                .terms
                .iter()
                .map(|((u, e), c)| ((*u, add_deg(e, d)), c.clone()))
                .collect(),
        }
    }
}

pub(crate) fn add_deg(a: &[u32], b: &[u32]) -> Degree {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn deg_le(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// All splittings `d = d1 + d2`.
fn splittings(d: &[u32]) -> Vec<(Degree, Degree)> {
    let mut out = vec![(Vec::new(), Vec::new())];
    for &a in d {
        let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
        for (l, r) in &out {
            for k in 0..=a {
                let mut l2 = l.clone();
                let mut r2 = r.clone();
                l2.push(k);
                r2.push(a - k);
                next.push((l2, r2));
            }
        }
        out = next;
    }
    out
}

/// All degrees with `Σ a_i deg q_i <= cap`, sorted by weight then lexicographically.
pub fn degrees_up_to(q_degrees: &[i64], cap: i64) -> Vec<Degree> {
    let mut out: Vec<Degree> = vec![Vec::new()];
    for &g in q_degrees {
        let mut next = Vec::new();
        for d in &out {
            let used: i64 = d.iter().zip(q_degrees).map(|(&a, &w)| a as i64 * w).sum();
            let mut a = 0u32;
            while used + a as i64 * g <= cap {
                let mut e = d.clone();
                e.push(a);
                next.push(e);
                a += 1;
            }
        }
        out = next;
    }
    let weight = |d: &Degree| -> i64 { d.iter().zip(q_degrees).map(|(&a, &w)| a as i64 * w).sum() };
    out.sort_by(|a, b| weight(a).cmp(&weight(b)).then_with(|| a.cmp(b)));
    out
}

/// Terms of `D_i ⋆ τ_w` in the length basis: `(τ-index, degree, coefficient)`.
fn chevalley_tau(ctx: &ParabolicContext, node: usize, w: usize) -> Result<Vec<(usize, Degree, i64)>> {
    let rs = ctx.root_system();
    let lw = ctx.length(w);
    let mut out: BTreeMap<(usize, Degree), i64> = BTreeMap::new();
    for beta in ctx.unipotent_roots() {
        let coroot = rs.coroot(beta);
        let coef = as_i64(&coroot[node])
            .ok_or_else(|| Error::Internal("non-integral coroot coordinate".into()))?;
        if coef == 0 {
            continue;
        }
        let x = ctx.times_reflection(w, beta);
        if ctx.is_minimal(&x) {
            if let Some(ix) = ctx.index_of(&x) {
                if ctx.length(ix) == lw + 1 {
                    *out.entry((ix, vec![0; ctx.s_p().len()])).or_insert(0) += coef;
                }
            }
        }
        let d: Degree = ctx
            .root_degree(beta)
            .iter()
            .map(|c| as_i64(c).and_then(|v| u32::try_from(v).ok()))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Internal("curve class of a root is not a nonnegative integer".into()))?;
        let y = ctx.min_rep(&x)?;
        if ctx.length(y) as i64 == lw as i64 + 1 - ctx.q_weight(&d) {
            *out.entry((y, d)).or_insert(0) += coef;
        }
    }
    Ok(out.into_iter().map(|((u, d), c)| (u, d, c)).collect())
}

/// The operator of quantum multiplication by the codimension-one class of
/// `α_node` (0-based node in `S_P`), as the list of products `D ⋆ σ_u`.
pub fn chevalley_operator(ctx: &ParabolicContext, node: usize) -> Result<Vec<QRingElement>> {
    if !ctx.s_p().contains(&node) {
        return Err(Error::NoSuchNode {
            node: node + 1,
            rank: ctx.root_system().rank(),
        });
    }
    (0..ctx.len())
        .map(|u| {
            let w = ctx.dual(u);
            let mut e = QRingElement::zero();
            for (x, d, c) in chevalley_tau(ctx, node, w)? {
                e.add_term(ctx.dual(x), d, BigInt::from(c));
            }
            Ok(e)
        })
        .collect()
}

#[derive(Clone, Copy, Debug)]
enum Lin {
    Const(i64),
    Var(usize),
}

fn sorted3(a: usize, b: usize, c: usize) -> [usize; 3] {
    let mut t = [a, b, c];
    t.sort_unstable();
    t
}

/// Builder state: 3-point invariants `⟨τ_a, τ_b, τ_c⟩_d` in the length basis.
struct Solver<'a> {
    ctx: &'a ParabolicContext,
    divisor_of: HashMap<usize, usize>,
    chevalley: HashMap<(usize, usize), Vec<(usize, Degree, i64)>>,
    solved: HashMap<(Degree, [usize; 3]), i64>,
}

impl<'a> Solver<'a> {
    fn new(ctx: &'a ParabolicContext) -> Result<Self> {
        let mut divisor_of = HashMap::new();
        let mut chevalley = HashMap::new();
        for &i in ctx.s_p() {
            let s = ctx.index_of_word(&[i])?;
            divisor_of.insert(s, i);
            for w in 0..ctx.len() {
                chevalley.insert((i, w), chevalley_tau(ctx, i, w)?);
            }
        }
        Ok(Self {
            ctx,
            divisor_of,
            chevalley,
            solved: HashMap::new(),
        })
    }

    fn fits(&self, d: &[u32], a: usize, b: usize, c: usize) -> bool {
        let l = self.ctx.length(a) + self.ctx.length(b) + self.ctx.length(c);
        l as i64 == self.ctx.dim() as i64 + self.ctx.q_weight(d)
    }

    /// Value fixed by the unit or divisor axiom, if any entry is `e` or a divisor.
    fn known(&self, d: &[u32], t: [usize; 3]) -> Option<i64> {
        if !self.fits(d, t[0], t[1], t[2]) {
            return Some(0);
        }
        for k in 0..3 {
            let (x, y) = (t[(k + 1) % 3], t[(k + 2) % 3]);
            if t[k] == 0 {
                let v = d.iter().all(|&a| a == 0) && self.ctx.dual(y) == x;
                return Some(v as i64);
            }
            if let Some(&node) = self.divisor_of.get(&t[k]) {
                let target = self.ctx.dual(y);
                let v = self.chevalley[&(node, x)]
                    .iter()
                    .filter(|(z, e, _)| *z == target && e.as_slice() == d)
                    .map(|(_, _, c)| *c)
                    .sum();
                return Some(v);
            }
        }
        None
    }

    fn value(&self, d: &[u32], t: [usize; 3], vars: &HashMap<[usize; 3], usize>) -> Lin {
        let t = sorted3(t[0], t[1], t[2]);
        if let Some(v) = self.known(d, t) {
            return Lin::Const(v);
        }
        if let Some(&v) = self.solved.get(&(d.to_vec(), t)) {
            return Lin::Const(v);
        }
        match vars.get(&t) {
            Some(&i) => Lin::Var(i),
            None => Lin::Const(0),
        }
    }

    /// Coefficient of `q^d τ_x` in `τ_a ⋆ τ_b`.
    fn prod(&self, d: &[u32], a: usize, b: usize, x: usize, vars: &HashMap<[usize; 3], usize>) -> Lin {
        self.value(d, [a, b, self.ctx.dual(x)], vars)
    }

    fn check_divisor_symmetry(&self, degrees: &[Degree]) -> Result<()> {
        let n = self.ctx.len();
        for d in degrees {
            for &s in self.divisor_of.keys() {
                for a in 0..n {
                    for b in 0..n {
                        let direct = |x: usize, y: usize| {
                            let node = self.divisor_of[&s];
                            let target = self.ctx.dual(y);
                            self.chevalley[&(node, x)]
                                .iter()
                                .filter(|(z, e, _)| *z == target && e == d)
                                .map(|(_, _, c)| *c)
                                .sum::<i64>()
                        };
                        if direct(a, b) != direct(b, a) {
                            return Err(Error::Internal(format!(
                                "{}: quantum Chevalley coefficients are not symmetric",
                                self.ctx.name()
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn unknowns(&self, d: &[u32]) -> Vec<[usize; 3]> {
        let n = self.ctx.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    let t = [a, b, c];
                    if self.known(d, t).is_none() {
                        out.push(t);
                    }
                }
            }
        }
        out
    }

    fn solve_degree(&mut self, d: &Degree) -> Result<()> {
        let unknowns = self.unknowns(d);
        if unknowns.is_empty() {
            return Ok(());
        }
        let vars: HashMap<[usize; 3], usize> =
            unknowns.iter().enumerate().map(|(i, t)| (*t, i)).collect();
        let nv = unknowns.len();
        let n = self.ctx.len();
        let nparams = d.len();
        let zero: Degree = vec![0; nparams];
        let classical = d.iter().all(|&a| a == 0);
        let mut rows: Matrix = Vec::new();
        let mut rhs: Matrix = Vec::new();

        let push = |row: Vec<Rational>, c: Rational, rows: &mut Matrix, rhs: &mut Matrix| {
            if row.iter().any(|x| !x.is_zero()) || !c.is_zero() {
                rows.push(row);
                rhs.push(vec![-c]);
            }
        };

        if classical {
            // ⟨D, a, b, c⟩ expanded through D⋆a and through D⋆b.
            for (&s, &node) in &self.divisor_of {
                let _ = s;
                for a in 1..n {
                    for b in 1..n {
                        for c in 1..n {
                            let l = self.ctx.length(a) + self.ctx.length(b) + self.ctx.length(c);
                            if l + 1 != self.ctx.dim() {
                                continue;
                            }
                            let mut row = vec![Rational::zero(); nv];
                            let mut cst = Rational::zero();
                            let mut acc = |sign: i64, coef: i64, lin: Lin| match lin {
                                Lin::Const(v) => cst += int(sign * coef * v),
                                Lin::Var(i) => row[i] += int(sign * coef),
                            };
                            for (x, e, k) in &self.chevalley[&(node, a)] {
                                if *e == zero {
                                    acc(1, *k, self.value(d, [*x, b, c], &vars));
                                }
                            }
                            for (y, e, k) in &self.chevalley[&(node, b)] {
                                if *e == zero {
                                    acc(-1, *k, self.value(d, [a, *y, c], &vars));
                                }
                            }
                            push(row, cst, &mut rows, &mut rhs);
                        }
                    }
                }
            }
        } else {
            // (τ_a ⋆ τ_b) ⋆ τ_c = τ_a ⋆ (τ_b ⋆ τ_c) at q^d, linear in degree-d unknowns.
            let splits = splittings(d);
            let weight = self.ctx.q_weight(d);
            for a in 1..n {
                for b in 1..n {
                    for c in 1..n {
                        let total = (self.ctx.length(a) + self.ctx.length(b) + self.ctx.length(c)) as i64;
                        for w in 0..n {
                            if total - weight != self.ctx.length(w) as i64 {
                                continue;
                            }
                            let mut row = vec![Rational::zero(); nv];
                            let mut cst = Rational::zero();
                            for (d1, d2) in &splits {
                                for x in 0..n {
                                    let terms = [
                                        (1, self.prod(d1, a, b, x, &vars), self.prod(d2, x, c, w, &vars)),
                                        (-1, self.prod(d1, b, c, x, &vars), self.prod(d2, a, x, w, &vars)),
                                    ];
                                    for (sign, p, q) in terms {
                                        match (p, q) {
                                            (Lin::Const(u), Lin::Const(v)) => cst += int(sign * u * v),
                                            (Lin::Var(i), Lin::Const(v)) | (Lin::Const(v), Lin::Var(i)) => {
                                                row[i] += int(sign * v)
                                            }
                                            (Lin::Var(_), Lin::Var(_)) => {
                                                return Err(Error::Internal(
                                                    "associativity is not linear in the current degree".into(),
                                                ))
                                            }
                                        }
                                    }
                                }
                            }
                            push(row, cst, &mut rows, &mut rhs);
                        }
                    }
                }
            }
        }

        let sol = match solve_unique(&rows, &rhs, nv) {
            Ok(s) => s,
            Err(SolveFailure::Underdetermined { .. }) => {
                return Err(Error::UnsupportedSpace {
                    space: self.ctx.name(),
                    degree: format_degree(d),
                })
            }
            Err(SolveFailure::Inconsistent) => {
                return Err(Error::Internal(format!(
                    "{}: structure constants of degree {} are inconsistent",
                    self.ctx.name(),
                    format_degree(d)
                )))
            }
        };
        for (t, v) in unknowns.iter().zip(sol) {
            let v = as_i64(&v[0]).ok_or_else(|| {
                Error::Internal(format!("{}: non-integral structure constant", self.ctx.name()))
            })?;
            self.solved.insert((d.clone(), *t), v);
        }
        Ok(())
    }
}

fn format_degree(d: &[u32]) -> String {
    format!(
        "({})",
        d.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    )
}

/// Complete table of the small quantum product in the Schubert basis.
pub struct StructureTable {
    ctx: Arc<ParabolicContext>,
    degrees: Vec<Degree>,
    /// `products[u][v] = σ_u ⋆ σ_v`.
    products: Vec<Vec<QRingElement>>,
}

impl std::fmt::Debug for StructureTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "StructureTable({})", self.ctx.name())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TableEntry {
    pub u: String,
    pub v: String,
    pub w: String,
    pub d: Vec<u32>,
    pub coeff: i64,
}

impl StructureTable {
    pub fn build(ctx: Arc<ParabolicContext>) -> Result<Self> {
        let n = ctx.len();
        let degrees = degrees_up_to(ctx.q_degrees(), 2 * ctx.dim() as i64);
        let mut solver = Solver::new(&ctx)?;
        solver.check_divisor_symmetry(&degrees)?;
        for d in &degrees {
            solver.solve_degree(d)?;
        }
        let empty = HashMap::new();
        let mut tau: Vec<Vec<QRingElement>> = vec![vec![QRingElement::zero(); n]; n];
        for a in 0..n {
            for b in 0..n {
                let mut e = QRingElement::zero();
                for d in &degrees {
                    for x in 0..n {
                        if let Lin::Const(v) = solver.prod(d, a, b, x, &empty) {
                            e.add_term(ctx.dual(x), d.clone(), BigInt::from(v));
                        }
                    }
                }
                tau[a][b] = e;
            }
        }
        // Re-index rows and columns from τ to σ.
        let products = (0..n)
            .map(|u| (0..n).map(|v| tau[ctx.dual(u)][ctx.dual(v)].clone()).collect())
            .collect();
        Ok(Self {
            ctx,
            degrees,
            products,
        })
    }

    /// Rebuilds a table from its exported entries (e.g. a disk cache).
    pub fn from_entries(ctx: Arc<ParabolicContext>, entries: &[TableEntry]) -> Result<Self> {
        let n = ctx.len();
        let idx = |w: &str| {
            let word = parse_word(w).ok_or_else(|| Error::NotMinimalRepresentative(w.to_string()))?;
            ctx.index_of_word(&word)
        };
        let mut products = vec![vec![QRingElement::zero(); n]; n];
        for e in entries {
            if e.d.len() != ctx.s_p().len() {
                return Err(Error::DegreeLength {
                    expected: ctx.s_p().len(),
                    got: e.d.len(),
                });
            }
            let (u, v, w) = (idx(&e.u)?, idx(&e.v)?, idx(&e.w)?);
            products[u][v].add_term(ctx.dual(w), e.d.clone(), BigInt::from(e.coeff));
        }
        let degrees = degrees_up_to(ctx.q_degrees(), 2 * ctx.dim() as i64);
        Ok(Self {
            ctx,
            degrees,
            products,
        })
    }

    pub fn context(&self) -> &Arc<ParabolicContext> {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.ctx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ctx.is_empty()
    }

    pub fn n_params(&self) -> usize {
        self.ctx.s_p().len()
    }

    /// Degrees for which 3-point invariants were computed.
    pub fn degrees(&self) -> &[Degree] {
        &self.degrees
    }

    /// Index of the fundamental class `σ_{w_max}`.
    pub fn unit(&self) -> usize {
        self.ctx.dual(0)
    }

    pub fn basis(&self, u: usize) -> QRingElement {
        QRingElement::basis(u, self.n_params())
    }

    /// `σ_u ⋆ σ_v`.
    pub fn product_basis(&self, u: usize, v: usize) -> &QRingElement {
        &self.products[u][v]
    }

    /// `N(u, v, w, d)`: coefficient of `q^d σ_{w_o w w_o^P}` in `σ_u ⋆ σ_v`,
    /// equal to `⟨σ_u, σ_v, σ_w⟩_d`.
    pub fn coefficient(&self, u: usize, v: usize, w: usize, d: &[u32]) -> BigInt {
        self.products[u][v].coefficient(self.ctx.dual(w), d)
    }

    pub fn product(&self, a: &QRingElement, b: &QRingElement) -> QRingElement {
        self.product_bounded(a, b, None)
    }

    /// Product dropping all terms whose degree is not `<= bound`.
    pub fn product_bounded(&self, a: &QRingElement, b: &QRingElement, bound: Option<&[u32]>) -> QRingElement {
        let mut out = QRingElement::zero();
        for (u, du, cu) in a.terms() {
            for (v, dv, cv) in b.terms() {
                let base = add_deg(du, dv);
                if bound.is_some_and(|bd| !deg_le(&base, bd)) {
                    continue;
                }
                for (w, dw, cw) in self.products[u][v].terms() {
                    let d = add_deg(&base, dw);
                    if bound.is_some_and(|bd| !deg_le(&d, bd)) {
                        continue;
                    }
                    out.add_term(w, d, cu * cv * cw);
                }
            }
        }
        out
    }

    pub fn check_tuple(&self, tuple: &[usize], d: &[u32]) -> Result<()> {
        if tuple.len() < 3 {
            return Err(Error::TupleTooShort {
                min: 3,
                got: tuple.len(),
            });
        }
        if d.len() != self.n_params() {
            return Err(Error::DegreeLength {
                expected: self.n_params(),
                got: d.len(),
            });
        }
        if let Some(&bad) = tuple.iter().find(|&&u| u >= self.len()) {
            return Err(Error::NotMinimalRepresentative(format!("index {bad}")));
        }
        Ok(())
    }

    /// Whether `Σ codim(u_k) = dim X^P + Σ a_i deg q_i`.
    pub fn dimension_condition(&self, tuple: &[usize], d: &[u32]) -> bool {
        let lhs: i64 = tuple.iter().map(|&u| self.ctx.codim(u) as i64).sum();
        lhs == self.ctx.dim() as i64 + self.ctx.q_weight(d)
    }

    /// `⟨σ_{u_1}, …, σ_{u_n}⟩_d`, read as the coefficient of
    /// `q^d σ_{w_o u_n w_o^P}` in `σ_{u_1} ⋆ ⋯ ⋆ σ_{u_{n-1}}`.
    pub fn gw_invariant(&self, tuple: &[usize], d: &[u32]) -> Result<BigInt> {
        self.check_tuple(tuple, d)?;
        if !self.dimension_condition(tuple, d) {
            return Ok(BigInt::zero());
        }
        let (last, init) = tuple.split_last().expect("nonempty tuple");
        let mut acc = self.basis(init[0]);
        for &u in &init[1..] {
            acc = self.product_bounded(&acc, &self.basis(u), Some(d));
        }
        Ok(acc.coefficient(self.ctx.dual(*last), d))
    }

    /// Nonzero constants as `{u, v, w, d, coeff}` with reduced words.
    pub fn entries(&self) -> Vec<TableEntry> {
        let word = |i: usize| format_word(self.ctx.element(i).word());
        let mut out = Vec::new();
        for u in 0..self.len() {
            for v in 0..self.len() {
                for (x, d, c) in self.products[u][v].terms() {
                    out.push(TableEntry {
                        u: word(u),
                        v: word(v),
                        w: word(self.ctx.dual(x)),
                        d: d.clone(),
                        coeff: c.to_i64().unwrap_or(i64::MAX),
                    });
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.entries()).expect("table entries serialize")
    }
}
