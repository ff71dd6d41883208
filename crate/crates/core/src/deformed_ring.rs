//! The τ-deformed product `⊙` on quantum cohomology and its specialization
//! `⊙₀` at `τ = 0`.
//!
//! Every structure constant `N(u, v, w, d)` is decorated with
//! `Π τ_i^{A_i(u, v, w, d)}` where
//! `A_i = (χ_e - χ_u - χ_v - χ_w)(x_i) + 2 a_i g* / ⟨α_i, α_i⟩`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum_ring::{add_deg, Degree, QRingElement, StructureTable};
use crate::rational::{as_i64, int, Rational};
use crate::weyl::ParabolicContext;

/// `A_i(u, v, w, d)` for each `α_i ∈ S_P`, by both expressions (asserted equal).
pub fn a_exponent(ctx: &ParabolicContext, u: usize, v: usize, w: usize, d: &[u32]) -> Result<Vec<i64>> {
    n_ary_exponent(ctx, &[u, v, w], d)
}

/// `((n-2)χ_e - Σ_k χ_{u_k})(x_i) + 2 a_i g*/⟨α_i, α_i⟩`: the total τ-exponent
/// carried by any term `q^d σ_{w_o u_n w_o^P}` of an iterated `⊙` product.
pub fn n_ary_exponent(ctx: &ParabolicContext, tuple: &[usize], d: &[u32]) -> Result<Vec<i64>> {
    if d.len() != ctx.s_p().len() {
        return Err(Error::DegreeLength {
            expected: ctx.s_p().len(),
            got: d.len(),
        });
    }
    let rs = ctx.root_system();
    let n = tuple.len() as i64;
    let g = rs.dual_coxeter();
    ctx.s_p()
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let chi_part: i64 = (n - 2) * ctx.chi_on_x(0)[i]
                - tuple.iter().map(|&u| ctx.chi_on_x(u)[i]).sum::<i64>();
            let norm_form = Rational::from(int(2 * d[k] as i64 * g)) / &rs.simple_norms()[i];
            // Σ_{α ∈ R⁺ \ R⁺_l} α(x_i) α(d̃), d̃ = Σ_j a_j α_j^∨.
            let root_sum: i64 = ctx
                .unipotent_roots()
                .iter()
                .map(|b| {
                    b[i] * ctx
                        .s_p()
                        .iter()
                        .zip(d)
                        .map(|(&j, &a)| a as i64 * rs.pair_root_coroot(b, j))
                        .sum::<i64>()
                })
                .sum();
            if norm_form != int(root_sum) {
                return Err(Error::Internal(format!(
                    "{}: the two expressions for A_{} disagree",
                    ctx.name(),
                    i + 1
                )));
            }
            let total = int(chi_part) + norm_form;
            as_i64(&total).ok_or_else(|| Error::Internal("non-integral τ-exponent".into()))
        })
        .collect()
}

/// A `Z[q, τ]`-linear combination of Schubert classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeformedElement {
    terms: BTreeMap<(usize, Degree, Vec<i64>), BigInt>,
}

impl DeformedElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(u: usize, n_params: usize) -> Self {
        let mut e = Self::zero();
        e.add_term(u, vec![0; n_params], vec![0; n_params], BigInt::one());
        e
    }

    pub fn add_term(&mut self, u: usize, d: Degree, tau: Vec<i64>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let key = (u, d, tau);
        let entry = self.terms.entry(key.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Degree, &Vec<i64>, &BigInt)> {
        self.terms.iter().map(|((u, d, e), c)| (*u, d, e, c))
    }

    /// Specialization `τ = 1`.
    pub fn at_tau_one(&self) -> QRingElement {
        let mut out = QRingElement::zero();
        for (u, d, _, c) in self.terms() {
            out.add_term(u, d.clone(), c.clone());
        }
        out
    }

    /// Specialization `τ = 0`: keeps the terms with all exponents zero.
    pub fn at_tau_zero(&self) -> QRingElement {
        let mut out = QRingElement::zero();
        for (u, d, e, c) in self.terms() {
            if e.iter().all(|&x| x == 0) {
                out.add_term(u, d.clone(), c.clone());
            }
        }
        out
    }
}

/// A structure table together with the τ-exponent of every nonzero constant.
pub struct DeformedRing {
    table: Arc<StructureTable>,
    /// `products[u][v] = σ_u ⊙ σ_v`.
    products: Vec<Vec<DeformedElement>>,
}

impl std::fmt::Debug for DeformedRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DeformedRing({})", self.table.context().name())
    }
}

impl DeformedRing {
    pub fn new(table: Arc<StructureTable>) -> Result<Self> {
        let ctx = table.context().clone();
        let n = table.len();
        let mut products = vec![vec![DeformedElement::zero(); n]; n];
        for u in 0..n {
            for v in 0..n {
                let mut e = DeformedElement::zero();
                for (x, d, c) in table.product_basis(u, v).terms() {
                    let a = a_exponent(&ctx, u, v, ctx.dual(x), d)?;
                    e.add_term(x, d.clone(), a, c.clone());
                }
                products[u][v] = e;
            }
        }
        Ok(Self { table, products })
    }

    pub fn table(&self) -> &Arc<StructureTable> {
        &self.table
    }

    pub fn context(&self) -> &Arc<ParabolicContext> {
        self.table.context()
    }

    /// `σ_u ⊙ σ_v`.
    pub fn deformed_product(&self, u: usize, v: usize) -> &DeformedElement {
        &self.products[u][v]
    }

    /// Product of arbitrary `Z[q, τ]` combinations.
    pub fn mul(&self, a: &DeformedElement, b: &DeformedElement) -> DeformedElement {
        let mut out = DeformedElement::zero();
        for (u, du, eu, cu) in a.terms() {
            for (v, dv, ev, cv) in b.terms() {
                for (w, dw, ew, cw) in self.products[u][v].terms() {
                    let d = add_deg(&add_deg(du, dv), dw);
                    let e: Vec<i64> = eu.iter().zip(ev).zip(ew).map(|((x, y), z)| x + y + z).collect();
                    out.add_term(w, d, e, cu * cv * cw);
                }
            }
        }
        out
    }

    /// `a ⊙₀ b`, dropping terms whose degree is not `<= bound`.
    pub fn mul_zero(&self, a: &QRingElement, b: &QRingElement, bound: Option<&[u32]>) -> QRingElement {
        let mut out = QRingElement::zero();
        for (u, du, cu) in a.terms() {
            for (v, dv, cv) in b.terms() {
                for (w, dw, ew, cw) in self.products[u][v].terms() {
                    if ew.iter().any(|&x| x != 0) {
                        continue;
                    }
                    let d = add_deg(&add_deg(du, dv), dw);
                    if bound.is_some_and(|bd| d.iter().zip(bd).any(|(x, y)| x > y)) {
                        continue;
                    }
                    out.add_term(w, d, cu * cv * cw);
                }
            }
        }
        out
    }

    /// `⟨σ_{u_1}, …, σ_{u_n}⟩^{⊙₀}_d`: the coefficient of `q^d σ_{w_o u_n w_o^P}`
    /// in `σ_{u_1} ⊙₀ ⋯ ⊙₀ σ_{u_{n-1}}`.
    pub fn deformed_coeff_tuple(&self, tuple: &[usize], d: &[u32]) -> Result<BigInt> {
        // Validates the arguments.
        self.table.check_tuple(tuple, d)?;
        if !self.table.dimension_condition(tuple, d) {
            return Ok(BigInt::zero());
        }
        let np = self.table.n_params();
        let (last, init) = tuple.split_last().expect("nonempty tuple");
        let mut acc = QRingElement::basis(init[0], np);
        for &u in &init[1..] {
            acc = self.mul_zero(&acc, &QRingElement::basis(u, np), Some(d));
        }
        Ok(acc.coefficient(self.context().dual(*last), d))
    }

    /// Quantum Levi-movability: the `⊙₀` coefficient is nonzero. Cross-checked
    /// against "nonzero invariant and vanishing total τ-exponent".
    pub fn is_levi_movable(&self, tuple: &[usize], d: &[u32]) -> Result<bool> {
        let c = self.deformed_coeff_tuple(tuple, d)?;
        let gw = self.table.gw_invariant(tuple, d)?;
        let exps = n_ary_exponent(self.context(), tuple, d)?;
        let criterion = !gw.is_zero() && exps.iter().all(|&x| x == 0);
        if criterion != !c.is_zero() {
            return Err(Error::Internal(format!(
                "{}: Levi-movability criteria disagree",
                self.context().name()
            )));
        }
        Ok(!c.is_zero())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Json,
}

#[derive(Debug, Serialize)]
struct JsonTerm {
    coeff: String,
    tau: i64,
    q: u32,
    class: String,
}

#[derive(Debug, Serialize)]
struct JsonCell {
    row: String,
    col: String,
    terms: Vec<JsonTerm>,
}

#[derive(Debug, Serialize)]
struct JsonTable {
    space: String,
    classes: Vec<String>,
    cells: Vec<JsonCell>,
}

/// Class labels `prefix + codim`, with a `.k` suffix when a codimension holds
/// several classes. Returned in display order (codim, then W^P order).
pub fn class_labels(ctx: &ParabolicContext, prefix: &str) -> Vec<(usize, String)> {
    let mut order: Vec<usize> = (0..ctx.len()).collect();
    order.sort_by_key(|&u| (ctx.codim(u), std::cmp::Reverse(u)));
    let mut out = Vec::new();
    for &u in &order {
        let k = ctx.codim(u);
        let same: Vec<usize> = order.iter().copied().filter(|&v| ctx.codim(v) == k).collect();
        let label = if same.len() == 1 {
            format!("{prefix}{k}")
        } else {
            let pos = same.iter().position(|&v| v == u).unwrap() + 1;
            format!("{prefix}{k}.{pos}")
        };
        out.push((u, label));
    }
    out
}

fn render_term(coeff: &BigInt, tau: i64, q: u32, label: &str) -> String {
    let mut s = String::new();
    if !coeff.is_one() {
        s.push_str(&coeff.to_string());
    }
    let power = |s: &mut String, sym: &str, e: i64| match e {
        0 => {}
        1 => s.push_str(sym),
        _ => s.push_str(&format!("{sym}^{e}")),
    };
    power(&mut s, "τ", tau);
    power(&mut s, "q", q as i64);
    s.push_str(label);
    s
}

/// Renders the upper-triangular `⊙` table of a maximal parabolic.
pub fn render_table(ring: &DeformedRing, format: TableFormat, prefix: &str) -> Result<String> {
    let ctx = ring.context();
    if !ctx.is_maximal() {
        return Err(Error::NotMaximal(ctx.s_p().len()));
    }
    let labels = class_labels(ctx, prefix);
    let label_of: BTreeMap<usize, &str> = labels.iter().map(|(u, l)| (*u, l.as_str())).collect();
    let codim_rank: BTreeMap<usize, usize> = labels.iter().enumerate().map(|(i, (u, _))| (*u, i)).collect();
    let cell_terms = |u: usize, v: usize| {
        let mut terms: Vec<(u32, i64, usize, BigInt, usize)> = ring
            .deformed_product(u, v)
            .terms()
            .map(|(x, d, e, c)| (d[0], e[0], codim_rank[&x], c.clone(), x))
            .collect();
        terms.sort_by_key(|t| (t.0, t.1, t.2));
        terms
    };
    let space = format!("H*({})", ctx.name());
    match format {
        TableFormat::Text => {
            let mut lines = Vec::new();
            let mut header = vec![space];
            header.extend(labels.iter().map(|(_, l)| l.clone()));
            lines.push(header.join(" | "));
            for (i, (u, lu)) in labels.iter().enumerate() {
                let mut row = vec![lu.clone()];
                for (j, (v, _)) in labels.iter().enumerate() {
                    if j < i {
                        row.push("-".into());
                        continue;
                    }
                    let terms = cell_terms(*u, *v);
                    let cell = if terms.is_empty() {
                        "0".to_string()
                    } else {
                        terms
                            .iter()
                            .map(|(q, t, _, c, x)| render_term(c, *t, *q, label_of[x]))
                            .collect::<Vec<_>>()
                            .join(" + ")
                    };
                    row.push(cell);
                }
                lines.push(row.join(" | "));
            }
            Ok(lines.join("\n") + "\n")
        }
        TableFormat::Json => {
            let mut cells = Vec::new();
            for (i, (u, lu)) in labels.iter().enumerate() {
                for (v, lv) in labels.iter().skip(i) {
                    cells.push(JsonCell {
                        row: lu.clone(),
                        col: lv.clone(),
                        terms: cell_terms(*u, *v)
                            .into_iter()
                            .map(|(q, tau, _, c, x)| JsonTerm {
                                coeff: c.to_string(),
                                tau,
                                q,
                                class: label_of[&x].to_string(),
                            })
                            .collect(),
                    });
                }
            }
            let t = JsonTable {
                space: ctx.name(),
                classes: labels.into_iter().map(|(_, l)| l).collect(),
                cells,
            };
            Ok(serde_json::to_string_pretty(&t).expect("table serializes") + "\n")
        }
    }
}

/// Splits a rendered text table into its cells, normalizing runs of
/// whitespace to single spaces. Used to compare against stored tables.
pub fn parse_text_table(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            l.split('|')
                .map(|c| c.split_whitespace().collect::<Vec<_>>().join(" "))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::RootSystem;

    fn ring(label: &str, sp: &[usize]) -> DeformedRing {
        let rs = Arc::new(RootSystem::from_label(label).unwrap());
        let ctx = Arc::new(ParabolicContext::new(rs, sp).unwrap());
        DeformedRing::new(Arc::new(StructureTable::build(ctx).unwrap())).unwrap()
    }

    fn by_codim(r: &DeformedRing, k: usize) -> usize {
        (0..r.table().len()).find(|&u| r.context().codim(u) == k).unwrap()
    }

    #[test]
    fn exponent_examples() {
        let r = ring("B2", &[1]);
        let a1 = by_codim(&r, 1);
        assert_eq!(a_exponent(r.context(), a1, a1, a1, &[0]).unwrap(), vec![1]);

        let r = ring("G2", &[0]);
        let b5 = by_codim(&r, 5);
        let b0 = by_codim(&r, 0);
        let w = r.context().dual(b0);
        assert_eq!(a_exponent(r.context(), b5, b5, w, &[2]).unwrap(), vec![4]);
    }

    #[test]
    fn deformed_products() {
        let r = ring("G2", &[1]);
        let c: Vec<usize> = (0..6).map(|k| by_codim(&r, k)).collect();
        let mut e = DeformedElement::zero();
        e.add_term(c[3], vec![0], vec![1], BigInt::from(2));
        e.add_term(c[0], vec![1], vec![1], BigInt::from(1));
        assert_eq!(r.deformed_product(c[1], c[2]), &e);
        for &u in &c {
            let p = r.deformed_product(c[0], u);
            assert_eq!(p, &DeformedElement::basis(u, 1));
        }
    }

    #[test]
    fn levi_movability_examples() {
        let r = ring("B2", &[1]);
        let a1 = by_codim(&r, 1);
        assert!(!r.is_levi_movable(&[a1, a1, a1], &[0]).unwrap());
        assert_eq!(r.deformed_coeff_tuple(&[a1, a1, a1], &[0]).unwrap(), BigInt::zero());

        let r = ring("G2", &[1]);
        let c1 = by_codim(&r, 1);
        let c2 = by_codim(&r, 2);
        let w = r.context().dual(c2);
        assert!(r.is_levi_movable(&[c1, c1, w], &[0]).unwrap());
        assert_eq!(r.deformed_coeff_tuple(&[c1, c1, w], &[0]).unwrap(), BigInt::from(3));
    }

    #[test]
    fn rendering_rejects_non_maximal() {
        let r = ring("A2", &[0, 1]);
        assert_eq!(render_table(&r, TableFormat::Text, "a").unwrap_err(), Error::NotMaximal(2));
    }

    #[test]
    fn term_rendering() {
        assert_eq!(render_term(&BigInt::from(2), 1, 2, "c0"), "2τq^2c0");
        assert_eq!(render_term(&BigInt::from(1), 0, 0, "c0"), "c0");
        assert_eq!(render_term(&BigInt::from(1), 4, 2, "b0"), "τ^4q^2b0");
    }
}
