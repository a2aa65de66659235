//! Partial tree kernel (Moschitti, 2006) over GRCTs, and its normalization.
//!
//! For nodes `n1`, `n2` with equal (kind, label):
//!
//! ```text
//! Δ(n1, n2) = μ · (λ² + Σ_{J1, J2, |J1| = |J2|} λ^{d(J1) + d(J2)} · Π_i Δ(c1[J1_i], c2[J2_i]))
//! ```
//!
//! where `J1`, `J2` range over strictly increasing child-index sequences of
//! equal length and `d(J) = J_last - J_first + 1`. Unequal nodes give 0.
//! The kernel is the sum of Δ over all node pairs.
//!
//! [`ptk`] evaluates the inner sum with an O(|c1|·|c2|) prefix recurrence;
//! [`ptk_oracle`] enumerates every sequence pair and is only usable on
//! small trees.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::grct::GrctTree;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KernelParams {
    /// Decay on child-subsequence span, in (0, 1].
    pub lambda: f64,
    /// Decay on depth, in (0, 1].
    pub mu: f64,
    /// Slack used when comparing normalized values with 1.
    pub tolerance: f64,
}

impl Default for KernelParams {
    fn default() -> Self {
        KernelParams {
            lambda: 0.4,
            mu: 0.4,
            tolerance: 1e-9,
        }
    }
}

impl KernelParams {
    pub fn new(lambda: f64, mu: f64) -> Result<Self, Error> {
        let p = KernelParams {
            lambda,
            mu,
            ..Default::default()
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let unit = |v: f64| v > 0.0 && v <= 1.0;
        if unit(self.lambda) && unit(self.mu) && self.tolerance > 0.0 && self.tolerance.is_finite()
        {
            Ok(())
        } else {
            Err(Error::InvalidParams {
                lambda: self.lambda,
                mu: self.mu,
                tolerance: self.tolerance,
            })
        }
    }
}

/// Largest tree [`ptk_oracle`] accepts.
pub const ORACLE_MAX_NODES: usize = 16;

/// Partial tree kernel value.
///
/// Arguments are put into a canonical order first, so `ptk(a, b)` and
/// `ptk(b, a)` run the identical floating-point computation.
pub fn ptk(a: &GrctTree, b: &GrctTree, p: &KernelParams) -> f64 {
    let (x, y) = if a <= b { (a, b) } else { (b, a) };
    delta_table(x, y, p).iter().flatten().sum()
}

/// `K(a, b) / sqrt(K(a, a) · K(b, b))`.
pub fn ncptk(a: &GrctTree, b: &GrctTree, p: &KernelParams) -> Result<f64, Error> {
    p.validate()?;
    let kaa = ptk(a, a, p);
    let kbb = ptk(b, b, p);
    if kaa <= 0.0 || kbb <= 0.0 {
        return Err(Error::ZeroSelfKernel);
    }
    Ok(ptk(a, b, p) / libm::sqrt(kaa * kbb))
}

/// Δ for every node pair, filled children-first (preorder arenas put
/// children at larger indices than their parents).
fn delta_table(a: &GrctTree, b: &GrctTree, p: &KernelParams) -> Vec<Vec<f64>> {
    let (na, nb) = (a.node_count(), b.node_count());
    let mut delta = vec![vec![0.0f64; nb]; na];
    let lambda2 = p.lambda * p.lambda;
    // scratch rows reused across pairs
    let mut p_prev: Vec<f64> = Vec::new();
    let mut p_cur: Vec<f64> = Vec::new();

    for i in (0..na).rev() {
        let n1 = a.node(i);
        for j in (0..nb).rev() {
            let n2 = b.node(j);
            if n1.kind != n2.kind || n1.label != n2.label {
                continue;
            }
            let (c1, c2) = (&n1.children, &n2.children);
            let mut sum_a = 0.0;
            if !c1.is_empty() && !c2.is_empty() {
                let m = c2.len();
                p_prev.clear();
                p_prev.resize(m, 0.0);
                p_cur.clear();
                p_cur.resize(m, 0.0);
                for (r, &ch1) in c1.iter().enumerate() {
                    let mut q_left = 0.0;
                    for (s, &ch2) in c2.iter().enumerate() {
                        let d = delta[ch1][ch2];
                        // A(r, s): sequences ending exactly at (r, s)
                        let a_rs = if d == 0.0 {
                            0.0
                        } else {
                            let before = if r > 0 && s > 0 { p_prev[s - 1] } else { 0.0 };
                            d * (1.0 + lambda2 * before)
                        };
                        sum_a += a_rs;
                        // Q(r, s) = A(r, s) + λ Q(r, s-1);  P(r, s) = Q(r, s) + λ P(r-1, s)
                        let q = a_rs + p.lambda * q_left;
                        q_left = q;
                        p_cur[s] = q + p.lambda * if r > 0 { p_prev[s] } else { 0.0 };
                    }
                    core::mem::swap(&mut p_prev, &mut p_cur);
                }
            }
            delta[i][j] = p.mu * (lambda2 + lambda2 * sum_a);
        }
    }
    delta
}

/// Kernel value by brute-force enumeration of child subsequence pairs.
pub fn ptk_oracle(a: &GrctTree, b: &GrctTree, p: &KernelParams) -> Result<f64, Error> {
    for t in [a, b] {
        if t.node_count() > ORACLE_MAX_NODES {
            return Err(Error::OracleTooLarge {
                nodes: t.node_count(),
                limit: ORACLE_MAX_NODES,
            });
        }
    }
    let mut total = 0.0;
    for i in 0..a.node_count() {
        for j in 0..b.node_count() {
            total += oracle_delta(a, i, b, j, p);
        }
    }
    Ok(total)
}

fn oracle_delta(a: &GrctTree, i: usize, b: &GrctTree, j: usize, p: &KernelParams) -> f64 {
    let (n1, n2) = (a.node(i), b.node(j));
    if n1.kind != n2.kind || n1.label != n2.label {
        return 0.0;
    }
    let subsets = |len: usize| -> Vec<Vec<usize>> {
        (1u32..(1 << len))
            .map(|mask| (0..len).filter(|k| mask & (1 << k) != 0).collect())
            .collect()
    };
    let (s1, s2) = (subsets(n1.children.len()), subsets(n2.children.len()));
    let mut sum = p.lambda * p.lambda;
    for j1 in &s1 {
        for j2 in s2.iter().filter(|j2| j2.len() == j1.len()) {
            let span = |j: &Vec<usize>| (j[j.len() - 1] - j[0] + 1) as i32;
            let mut term = libm::pow(p.lambda, f64::from(span(j1) + span(j2)));
            for (&x, &y) in j1.iter().zip(j2) {
                term *= oracle_delta(a, n1.children[x], b, n2.children[y], p);
            }
            sum += term;
        }
    }
    p.mu * sum
}
