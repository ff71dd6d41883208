//! Weyl group elements, parabolic quotients `W^P` and the characters `χ_w`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{as_i64, int, rat, Rational};
use crate::root_system::{RootSystem, Weight};

pub const DEFAULT_GROUP_BOUND: usize = 1_000_000;

/// A Weyl group element in canonical form: its integer action on
/// fundamental-weight coordinates (`λ ↦ M λ`), together with the action on
/// simple-root coordinates and the lexicographically minimal reduced word.
#[derive(Clone)]
pub struct WeylElement {
    weight_mat: Vec<i64>,
    root_mat: Vec<i64>,
    word: Vec<usize>,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.weight_mat == other.weight_mat
    }
}

impl Eq for WeylElement {}

impl std::hash::Hash for WeylElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.weight_mat.hash(state);
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylElement({})", format_word(&self.word))
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_word(&self.word))
    }
}

/// Renders a word as `"s1 s2 s1"` (1-based), the empty word as `"e"`.
pub fn format_word(word: &[usize]) -> String {
    if word.is_empty() {
        "e".to_string()
    } else {
        word.iter()
            .map(|i| format!("s{}", i + 1))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Parses the output of [`format_word`].
pub fn parse_word(s: &str) -> Option<Vec<usize>> {
    let s = s.trim();
    if s == "e" || s.is_empty() {
        return Some(Vec::new());
    }
    s.split_whitespace()
        .map(|t| {
            t.strip_prefix('s')
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .map(|n| n - 1)
        })
        .collect()
}

fn matmul(a: &[i64], b: &[i64], l: usize) -> Vec<i64> {
    let mut out = vec![0; l * l];
    for i in 0..l {
        for k in 0..l {
            let x = a[i * l + k];
            if x == 0 {
                continue;
            }
            for j in 0..l {
                out[i * l + j] += x * b[k * l + j];
            }
        }
    }
    out
}

fn matvec(a: &[i64], v: &[i64], l: usize) -> Vec<i64> {
    (0..l)
        .map(|i| (0..l).map(|j| a[i * l + j] * v[j]).sum())
        .collect()
}

fn identity_mat(l: usize) -> Vec<i64> {
    let mut m = vec![0; l * l];
    for i in 0..l {
        m[i * l + i] = 1;
    }
    m
}

fn is_negative_root(v: &[i64]) -> bool {
    v.iter().sum::<i64>() < 0
}

impl WeylElement {
    pub fn identity(rs: &RootSystem) -> Self {
        let l = rs.rank();
        Self {
            weight_mat: identity_mat(l),
            root_mat: identity_mat(l),
            word: Vec::new(),
        }
    }

    pub fn simple_reflection(rs: &RootSystem, i: usize) -> Self {
        let (w, r) = simple_mats(rs, i);
        Self {
            weight_mat: w,
            root_mat: r,
            word: vec![i],
        }
    }

    /// Builds an element from any word (not necessarily reduced).
    pub fn from_word(rs: &RootSystem, word: &[usize]) -> Self {
        let l = rs.rank();
        let mut w = identity_mat(l);
        let mut r = identity_mat(l);
        for &i in word {
            let (sw, sr) = simple_mats(rs, i);
            w = matmul(&w, &sw, l);
            r = matmul(&r, &sr, l);
        }
        Self::from_mats(rs, w, r)
    }

    /// The reflection `s_β` for a positive root `β`.
    pub fn reflection(rs: &RootSystem, beta: &[i64]) -> Self {
        let l = rs.rank();
        let coroot: Vec<i64> = rs
            .coroot(beta)
            .iter()
            .map(|c| as_i64(c).expect("coroots are integral"))
            .collect();
        let beta_w = rs.root_to_weight(beta);
        // λ ↦ λ - λ(β^∨) β on fundamental coordinates.
        let mut w = identity_mat(l);
        for j in 0..l {
            for k in 0..l {
                w[j * l + k] -= beta_w[j] * coroot[k];
            }
        }
        // γ ↦ γ - ⟨γ, β^∨⟩ β on root coordinates.
        let mut r = identity_mat(l);
        for m in 0..l {
            let pairing: i64 = (0..l).map(|k| coroot[k] * rs.cartan()[k][m]).sum();
            for j in 0..l {
                r[j * l + m] -= beta[j] * pairing;
            }
        }
        Self::from_mats(rs, w, r)
    }

    fn from_mats(rs: &RootSystem, weight_mat: Vec<i64>, root_mat: Vec<i64>) -> Self {
        let mut e = Self {
            weight_mat,
            root_mat,
            word: Vec::new(),
        };
        e.word = e.greedy_word(rs);
        e
    }

    pub fn mul(&self, rs: &RootSystem, other: &WeylElement) -> WeylElement {
        let l = rs.rank();
        Self::from_mats(
            rs,
            matmul(&self.weight_mat, &other.weight_mat, l),
            matmul(&self.root_mat, &other.root_mat, l),
        )
    }

    /// Product without recomputing the reduced word; callers must not rely
    /// on [`WeylElement::word`] of the result.
    fn mul_raw(&self, rs: &RootSystem, other: &WeylElement) -> WeylElement {
        let l = rs.rank();
        Self {
            weight_mat: matmul(&self.weight_mat, &other.weight_mat, l),
            root_mat: matmul(&self.root_mat, &other.root_mat, l),
            word: Vec::new(),
        }
    }

    pub fn inverse(&self, rs: &RootSystem) -> WeylElement {
        let rev: Vec<usize> = self.word.iter().rev().copied().collect();
        Self::from_word(rs, &rev)
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn weight_matrix(&self) -> &[i64] {
        &self.weight_mat
    }

    /// `ℓ(w) = |{α ∈ R⁺ : w(α) < 0}|`, computed from the action.
    pub fn inversion_count(&self, rs: &RootSystem) -> usize {
        rs.positive_roots()
            .iter()
            .filter(|b| is_negative_root(&self.act_root(rs, b)))
            .count()
    }

    pub fn act_root(&self, rs: &RootSystem, beta: &[i64]) -> Vec<i64> {
        matvec(&self.root_mat, beta, rs.rank())
    }

    pub fn act_weight(&self, rs: &RootSystem, w: &Weight) -> Weight {
        let l = rs.rank();
        Weight::new(
            (0..l)
                .map(|i| {
                    (0..l)
                        .map(|j| int(self.weight_mat[i * l + j]) * &w.coords[j])
                        .fold(Rational::zero(), |a, b| a + b)
                })
                .collect(),
        )
    }

    /// Whether `w(α_i) < 0`, i.e. `s_i` is a right descent.
    pub fn has_right_descent(&self, rs: &RootSystem, i: usize) -> bool {
        let l = rs.rank();
        let col: Vec<i64> = (0..l).map(|j| self.root_mat[j * l + i]).collect();
        is_negative_root(&col)
    }

    /// Lexicographically minimal reduced word by repeatedly stripping the
    /// smallest left descent.
    fn greedy_word(&self, rs: &RootSystem) -> Vec<usize> {
        let l = rs.rank();
        let mut word = Vec::new();
        let mut cur = self.clone();
        loop {
            // s_i is a left descent of w iff w^{-1}(α_i) < 0 iff α_i is the
            // image of a negative root, i.e. some positive β has w(β) = -α_i.
            let mut found = None;
            'outer: for i in 0..l {
                for b in rs.positive_roots() {
                    let img = cur.act_root(rs, b);
                    if img.iter().enumerate().all(|(k, &x)| x == if k == i { -1 } else { 0 }) {
                        found = Some(i);
                        break 'outer;
                    }
                }
            }
            let Some(i) = found else { break };
            word.push(i);
            let (sw, sr) = simple_mats(rs, i);
            cur.weight_mat = matmul(&sw, &cur.weight_mat, l);
            cur.root_mat = matmul(&sr, &cur.root_mat, l);
        }
        word
    }
}

fn simple_mats(rs: &RootSystem, i: usize) -> (Vec<i64>, Vec<i64>) {
    let l = rs.rank();
    let c = rs.cartan();
    // s_i(λ) = λ - λ_i α_i, α_i has fundamental coordinates c[j][i].
    let mut w = identity_mat(l);
    for j in 0..l {
        w[j * l + i] -= c[j][i];
    }
    // s_i(β) = β - ⟨β, α_i^∨⟩ α_i.
    let mut r = identity_mat(l);
    for k in 0..l {
        r[i * l + k] -= c[i][k];
    }
    (w, r)
}

/// All elements of `W`, breadth first from the identity, erroring when the
/// group would exceed `bound` elements.
pub fn enumerate_weyl(rs: &RootSystem, bound: usize) -> Result<Vec<WeylElement>> {
    let l = rs.rank();
    let gens: Vec<WeylElement> = (0..l).map(|i| WeylElement::simple_reflection(rs, i)).collect();
    let e = WeylElement::identity(rs);
    let mut seen: HashMap<Vec<i64>, ()> = HashMap::from([(e.weight_mat.clone(), ())]);
    let mut out = vec![e];
    let mut frontier = 0;
    while frontier < out.len() {
        let w = out[frontier].clone();
        frontier += 1;
        for g in &gens {
            let x = w.mul_raw(rs, g);
            if seen.insert(x.weight_mat.clone(), ()).is_none() {
                if out.len() >= bound {
                    return Err(Error::GroupTooLarge {
                        order: out.len() + 1,
                        bound,
                    });
                }
                out.push(x);
            }
        }
    }
    Ok(out
        .into_iter()
        .map(|x| WeylElement::from_mats(rs, x.weight_mat, x.root_mat))
        .collect())
}

/// The longest element of the subgroup generated by `gens`.
fn longest_in(rs: &RootSystem, gens: &[usize]) -> WeylElement {
    let mut cur = WeylElement::identity(rs);
    while let Some(&i) = gens.iter().find(|&&i| !cur.has_right_descent(rs, i)) {
        cur = cur.mul_raw(rs, &WeylElement::simple_reflection(rs, i));
    }
    WeylElement::from_mats(rs, cur.weight_mat, cur.root_mat)
}

/// A standard parabolic `P` with its quotient `W^P` and cached data.
pub struct ParabolicContext {
    rs: Arc<RootSystem>,
    s_p: Vec<usize>,
    delta_p: Vec<usize>,
    elements: Vec<WeylElement>,
    index: HashMap<Vec<i64>, usize>,
    dim: usize,
    rho_l: Weight,
    w0: WeylElement,
    w0_p: WeylElement,
    dual: Vec<usize>,
    chi: Vec<Weight>,
    chi_roots: Vec<Vec<i64>>,
    q_degrees: Vec<i64>,
    /// Positive roots outside the Levi, in simple-root coordinates.
    unipotent_roots: Vec<Vec<i64>>,
}

impl fmt::Debug for ParabolicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParabolicContext({})", self.name())
    }
}

impl ParabolicContext {
    /// `s_p` lists the simple roots (0-based) that are *not* in the Levi.
    pub fn new(rs: Arc<RootSystem>, s_p: &[usize]) -> Result<Self> {
        let l = rs.rank();
        let mut s_p: Vec<usize> = s_p.to_vec();
        s_p.sort_unstable();
        s_p.dedup();
        if s_p.is_empty() {
            return Err(Error::EmptyParabolic);
        }
        if let Some(&bad) = s_p.iter().find(|&&i| i >= l) {
            return Err(Error::NoSuchNode {
                node: bad + 1,
                rank: l,
            });
        }
        let delta_p: Vec<usize> = (0..l).filter(|i| !s_p.contains(i)).collect();
        let is_min = |w: &WeylElement| delta_p.iter().all(|&j| !w.has_right_descent(&rs, j));

        // W^P is closed under removing left descents, so it is reached from
        // e by length-increasing left multiplications.
        let mut elements = vec![WeylElement::identity(&rs)];
        let mut index: HashMap<Vec<i64>, usize> = HashMap::from([(elements[0].weight_mat.clone(), 0)]);
        let mut level = vec![0usize];
        let mut len = 0;
        while !level.is_empty() {
            let mut next = Vec::new();
            for &wi in &level {
                for i in 0..l {
                    let s = WeylElement::simple_reflection(&rs, i);
                    let x = s.mul_raw(&rs, &elements[wi]);
                    if index.contains_key(&x.weight_mat) || !is_min(&x) {
                        continue;
                    }
                    if x.inversion_count(&rs) != len + 1 {
                        continue;
                    }
                    let x = WeylElement::from_mats(&rs, x.weight_mat, x.root_mat);
                    index.insert(x.weight_mat.clone(), elements.len());
                    next.push(elements.len());
                    elements.push(x);
                }
            }
            level = next;
            len += 1;
        }
        elements.sort_by(|a, b| a.length().cmp(&b.length()).then_with(|| a.word.cmp(&b.word)));
        let index: HashMap<Vec<i64>, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, w)| (w.weight_mat.clone(), i))
            .collect();

        let is_levi = |b: &[i64]| s_p.iter().all(|&i| b[i] == 0);
        let unipotent_roots: Vec<Vec<i64>> = rs
            .positive_roots()
            .iter()
            .filter(|b| !is_levi(b))
            .cloned()
            .collect();
        let levi_sum: Vec<i64> = rs
            .positive_roots()
            .iter()
            .filter(|b| is_levi(b))
            .fold(vec![0; l], |acc, b| acc.iter().zip(b).map(|(a, x)| a + x).collect());
        let rho_l = rs.root_weight(&levi_sum).scale(&rat(1, 2));
        let dim = unipotent_roots.len();

        let w0 = longest_in(&rs, &(0..l).collect::<Vec<_>>());
        let w0_p = longest_in(&rs, &delta_p);

        let dual = elements
            .iter()
            .map(|w| {
                let x = w0.mul_raw(&rs, w).mul_raw(&rs, &w0_p);
                index
                    .get(&x.weight_mat)
                    .copied()
                    .ok_or_else(|| Error::Internal("w_o w w_o^P left W^P".into()))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut ctx = Self {
            rs,
            s_p,
            delta_p,
            elements,
            index,
            dim,
            rho_l,
            w0,
            w0_p,
            dual,
            chi: Vec::new(),
            chi_roots: Vec::new(),
            q_degrees: Vec::new(),
            unipotent_roots,
        };
        ctx.populate_chi()?;
        ctx.populate_q_degrees()?;
        Ok(ctx)
    }

    /// The maximal parabolic omitting node `node` (0-based).
    pub fn maximal(rs: Arc<RootSystem>, node: usize) -> Result<Self> {
        Self::new(rs, &[node])
    }

    fn populate_chi(&mut self) -> Result<()> {
        let rs = self.rs.clone();
        let l = rs.rank();
        let rho = rs.rho();
        let base = rho.sub(&self.rho_l.scale(&int(2)));
        for w in &self.elements {
            // Σ over β ∈ R⁺ \ R⁺_l with w(β) > 0.
            let sum = self
                .unipotent_roots
                .iter()
                .filter(|b| !is_negative_root(&w.act_root(&rs, b)))
                .fold(vec![0; l], |acc, b| acc.iter().zip(b).map(|(a, x)| a + x).collect::<Vec<i64>>());
            let by_roots = rs.root_weight(&sum);
            // ρ - 2ρ^L + w^{-1}ρ.
            let by_rho = base.add(&w.inverse(&rs).act_weight(&rs, &rho));
            if by_roots != by_rho {
                return Err(Error::Internal(format!(
                    "{}: χ formulas disagree at {w}",
                    self.name()
                )));
            }
            self.chi.push(by_roots);
            self.chi_roots.push(sum);
        }
        Ok(())
    }

    fn populate_q_degrees(&mut self) -> Result<()> {
        let chi_e = &self.chi[0];
        for &i in &self.s_p {
            let from_rho = int(2) - int(2) * &self.rho_l.coords[i];
            if from_rho != chi_e.coords[i] {
                return Err(Error::Internal(format!(
                    "{}: deg q_{} disagrees between 2-2ρ^L and χ_e",
                    self.name(),
                    i + 1
                )));
            }
            self.q_degrees
                .push(as_i64(&from_rho).ok_or_else(|| Error::Internal("non-integral deg q".into()))?);
        }
        Ok(())
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn name(&self) -> String {
        let nodes: Vec<String> = self.s_p.iter().map(|i| (i + 1).to_string()).collect();
        format!("{}/P{}", self.rs.label(), nodes.join(","))
    }

    pub fn s_p(&self) -> &[usize] {
        &self.s_p
    }

    pub fn delta_p(&self) -> &[usize] {
        &self.delta_p
    }

    pub fn is_maximal(&self) -> bool {
        self.s_p.len() == 1
    }

    /// `W^P`, sorted by length and then lexicographic reduced word.
    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, idx: usize) -> &WeylElement {
        &self.elements[idx]
    }

    pub fn index_of(&self, w: &WeylElement) -> Option<usize> {
        self.index.get(&w.weight_mat).copied()
    }

    /// Looks up a W^P element by reduced word (any reduced or non-reduced
    /// word representing it).
    pub fn index_of_word(&self, word: &[usize]) -> Result<usize> {
        let w = WeylElement::from_word(&self.rs, word);
        self.index_of(&w)
            .ok_or_else(|| Error::NotMinimalRepresentative(format_word(word)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rho_l(&self) -> &Weight {
        &self.rho_l
    }

    pub fn w0(&self) -> &WeylElement {
        &self.w0
    }

    pub fn w0_p(&self) -> &WeylElement {
        &self.w0_p
    }

    /// Index of `w_o w w_o^P`.
    pub fn dual(&self, idx: usize) -> usize {
        self.dual[idx]
    }

    /// Codimension `dim X^P - ℓ(w)` of the class `σ^P_w`.
    pub fn codim(&self, idx: usize) -> usize {
        self.dim - self.elements[idx].length()
    }

    pub fn length(&self, idx: usize) -> usize {
        self.elements[idx].length()
    }

    /// `χ_w` in fundamental-weight coordinates.
    pub fn chi(&self, idx: usize) -> &Weight {
        &self.chi[idx]
    }

    /// `χ_w(x_i)` for every simple root, i.e. `χ_w` in simple-root coordinates.
    pub fn chi_on_x(&self, idx: usize) -> &[i64] {
        &self.chi_roots[idx]
    }

    /// `deg q_i` for each `α_i ∈ S_P`, in the order of [`Self::s_p`].
    pub fn q_degrees(&self) -> &[i64] {
        &self.q_degrees
    }

    pub fn unipotent_roots(&self) -> &[Vec<i64>] {
        &self.unipotent_roots
    }

    pub fn is_levi_root(&self, beta: &[i64]) -> bool {
        self.s_p.iter().all(|&i| beta[i] == 0)
    }

    /// Whether `w(α_j) > 0` for all `α_j ∈ Δ_P`.
    pub fn is_minimal(&self, w: &WeylElement) -> bool {
        self.delta_p.iter().all(|&j| !w.has_right_descent(&self.rs, j))
    }

    /// The minimal representative of `w W_P`, as an index into `W^P`.
    pub fn min_rep(&self, w: &WeylElement) -> Result<usize> {
        let mut cur = w.clone();
        while let Some(&j) = self.delta_p.iter().find(|&&j| cur.has_right_descent(&self.rs, j)) {
            cur = cur.mul_raw(&self.rs, &WeylElement::simple_reflection(&self.rs, j));
        }
        self.index_of(&cur)
            .ok_or_else(|| Error::Internal("coset reduction left W^P".into()))
    }

    /// `w · s_β` as a raw product (no reduced word).
    pub(crate) fn times_reflection(&self, idx: usize, beta: &[i64]) -> WeylElement {
        let s = WeylElement::reflection(&self.rs, beta);
        self.elements[idx].mul_raw(&self.rs, &s)
    }

    /// Degree of `q^d` in the cohomological grading: `Σ a_i deg q_i`.
    pub fn q_weight(&self, d: &[u32]) -> i64 {
        d.iter()
            .zip(&self.q_degrees)
            .map(|(&a, &g)| a as i64 * g)
            .sum()
    }

    /// `s_{i,j} = Σ_{α ∈ R⁺ \ R⁺_l} α(x_i) α(α_j^∨)` for `α_i, α_j ∈ S_P`.
    pub fn s_matrix(&self) -> Vec<Vec<i64>> {
        self.s_p
            .iter()
            .map(|&i| {
                self.s_p
                    .iter()
                    .map(|&j| {
                        self.unipotent_roots
                            .iter()
                            .map(|b| b[i] * self.rs.pair_root_coroot(b, j))
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }

    /// `ω_j(β^∨)` for every `α_j ∈ S_P`: the curve class of the root `β`.
    pub fn root_degree(&self, beta: &[i64]) -> Vec<Rational> {
        let coroot = self.rs.coroot(beta);
        self.s_p.iter().map(|&j| coroot[j].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::RootSystem;

    fn rs(label: &str) -> Arc<RootSystem> {
        Arc::new(RootSystem::from_label(label).unwrap())
    }

    #[test]
    fn group_orders() {
        for (label, n) in [("A1", 2), ("A2", 6), ("B2", 8), ("G2", 12), ("A3", 24), ("B3", 48)] {
            let r = rs(label);
            let w = enumerate_weyl(&r, DEFAULT_GROUP_BOUND).unwrap();
            assert_eq!(w.len(), n, "{label}");
            for x in &w {
                assert_eq!(x.length(), x.inversion_count(&r));
            }
        }
    }

    #[test]
    fn bound_is_enforced() {
        let r = rs("B3");
        assert!(matches!(enumerate_weyl(&r, 10), Err(Error::GroupTooLarge { .. })));
    }

    #[test]
    fn words_round_trip() {
        assert_eq!(format_word(&[0, 1, 0]), "s1 s2 s1");
        assert_eq!(format_word(&[]), "e");
        assert_eq!(parse_word("s1 s2 s1"), Some(vec![0, 1, 0]));
        assert_eq!(parse_word("e"), Some(vec![]));
        assert_eq!(parse_word("s0"), None);
    }

    #[test]
    fn reduced_words_are_lex_minimal() {
        let r = rs("A2");
        let w = WeylElement::from_word(&r, &[1, 0, 1]);
        assert_eq!(w.word(), &[0, 1, 0]);
        let w = WeylElement::from_word(&r, &[0, 0]);
        assert_eq!(w.word(), &[] as &[usize]);
    }

    #[test]
    fn minimal_reps_small_cases() {
        let a1 = ParabolicContext::maximal(rs("A1"), 0).unwrap();
        assert_eq!(a1.len(), 2);
        assert_eq!(a1.dim(), 1);

        let b2 = ParabolicContext::maximal(rs("B2"), 1).unwrap();
        assert_eq!(b2.len(), 4);
        assert_eq!(b2.dim(), 3);
        let lens: Vec<usize> = (0..4).map(|i| b2.length(i)).collect();
        assert_eq!(lens, vec![0, 1, 2, 3]);

        let g2 = ParabolicContext::maximal(rs("G2"), 0).unwrap();
        assert_eq!(g2.len(), 6);
        assert_eq!(g2.dim(), 5);
    }

    #[test]
    fn empty_or_bad_parabolic() {
        assert_eq!(ParabolicContext::new(rs("A2"), &[]).unwrap_err(), Error::EmptyParabolic);
        assert!(matches!(
            ParabolicContext::new(rs("B2"), &[2]),
            Err(Error::NoSuchNode { node: 3, rank: 2 })
        ));
    }

    #[test]
    fn chi_and_q_degrees() {
        let b2 = ParabolicContext::maximal(rs("B2"), 1).unwrap();
        assert_eq!(b2.chi_on_x(0)[1], 4);
        let g2p1 = ParabolicContext::maximal(rs("G2"), 0).unwrap();
        assert_eq!(g2p1.q_degrees(), &[5]);
        assert_eq!(g2p1.chi(0).coords[0], int(5));
        let g2p2 = ParabolicContext::maximal(rs("G2"), 1).unwrap();
        assert_eq!(g2p2.q_degrees(), &[3]);
        let a1 = ParabolicContext::maximal(rs("A1"), 0).unwrap();
        assert_eq!(a1.q_degrees(), &[2]);
    }

    #[test]
    fn s_matrix_examples() {
        let a1 = ParabolicContext::maximal(rs("A1"), 0).unwrap();
        assert_eq!(a1.s_matrix(), vec![vec![2]]);
        let g2 = ParabolicContext::maximal(rs("G2"), 0).unwrap();
        assert_eq!(g2.s_matrix(), vec![vec![12]]);
        for (label, sp) in [("B2", vec![0]), ("B2", vec![1]), ("G2", vec![1]), ("A3", vec![0, 2]), ("A3", vec![1])] {
            let ctx = ParabolicContext::new(rs(label), &sp).unwrap();
            assert!(ctx.s_matrix().iter().flatten().all(|&x| x >= 0));
        }
    }

    #[test]
    fn duality_is_an_involution() {
        for (label, sp) in [("B2", vec![1]), ("G2", vec![0]), ("A3", vec![1]), ("A2", vec![0, 1])] {
            let ctx = ParabolicContext::new(rs(label), &sp).unwrap();
            for i in 0..ctx.len() {
                assert_eq!(ctx.dual(ctx.dual(i)), i);
                assert_eq!(ctx.codim(ctx.dual(i)), ctx.length(i));
            }
        }
    }

    #[test]
    fn group_order_ratio() {
        let r = rs("B3");
        let w = enumerate_weyl(&r, DEFAULT_GROUP_BOUND).unwrap().len();
        for node in 0..3 {
            let ctx = ParabolicContext::maximal(r.clone(), node).unwrap();
            let levi_rank: Vec<usize> = ctx.delta_p().to_vec();
            let wp = {
                let sub = enumerate_weyl(&r, DEFAULT_GROUP_BOUND)
                    .unwrap()
                    .into_iter()
                    .filter(|x| x.word().iter().all(|i| levi_rank.contains(i)))
                    .count();
                sub
            };
            assert_eq!(ctx.len() * wp, w);
        }
    }
}
