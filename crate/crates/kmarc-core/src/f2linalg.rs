//! F2-linear algebra on GF(2^h) viewed as an h-dimensional vector space
//! over F2: additive subgroups in canonical echelon form, trace duality,
//! and trace-constrained solving.

use crate::error::{Error, Result};
use crate::gf2e::{FieldCtx, FieldElement};

/// An additive (F2-linear) subgroup of GF(2^h), stored as a reduced
/// row-echelon basis with strictly decreasing leading bits and every pivot
/// bit cleared from the other vectors. The form is canonical: equal
/// subgroups compare equal vector-for-vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Subgroup {
    h: u32,
    basis: Vec<u32>,
}

fn leading_bit(x: u32) -> u32 {
    debug_assert!(x != 0);
    31 - x.leading_zeros()
}

impl Subgroup {
    pub fn trivial(h: u32) -> Subgroup {
        Subgroup { h, basis: Vec::new() }
    }

    pub fn full(h: u32) -> Subgroup {
        span_bits(h, (0..h).map(|i| 1 << i))
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn size(&self) -> u64 {
        1 << self.basis.len()
    }

    pub fn basis(&self) -> Vec<FieldElement> {
        self.basis.iter().map(|&b| FieldElement::from_bits(b)).collect()
    }

    fn reduce(&self, x: FieldElement) -> u32 {
        let mut v = x.bits();
        for &b in &self.basis {
            if v >> leading_bit(b) & 1 == 1 {
                v ^= b;
            }
        }
        v
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        self.reduce(x) == 0
    }

    /// All 2^rank elements, sorted; guarded against accidental blow-ups.
    pub fn enumerate(&self) -> Result<Vec<FieldElement>> {
        if self.rank() > 20 {
            return Err(Error::EnumerationGuard(self.rank()));
        }
        let mut out = Vec::with_capacity(1 << self.rank());
        out.push(0u32);
        for &b in &self.basis {
            for i in 0..out.len() {
                out.push(out[i] ^ b);
            }
        }
        out.sort_unstable();
        Ok(out.into_iter().map(FieldElement::from_bits).collect())
    }

    /// The least element of the coset x + S: clear every pivot bit of x.
    pub fn coset_leader(&self, x: FieldElement) -> FieldElement {
        FieldElement::from_bits(self.reduce(x))
    }

    /// Smallest subgroup containing both operands.
    pub fn join(&self, other: &Subgroup) -> Subgroup {
        span_bits(self.h, self.basis.iter().chain(&other.basis).copied())
    }

    pub fn intersect(&self, ctx: &FieldCtx, other: &Subgroup) -> Subgroup {
        trace_dual(ctx, &trace_dual(ctx, self).join(&trace_dual(ctx, other)))
    }

    /// Image under multiplication by a fixed scalar.
    pub fn scale(&self, ctx: &FieldCtx, k: FieldElement) -> Subgroup {
        span(self.h, &self.basis().iter().map(|&b| ctx.mul(k, b)).collect::<Vec<_>>())
    }

    /// Image under the field automorphism x -> x^(2^k).
    pub fn frobenius(&self, ctx: &FieldCtx, k: u32) -> Subgroup {
        span(self.h, &self.basis().iter().map(|&b| ctx.frobenius(b, k)).collect::<Vec<_>>())
    }
}

fn span_bits(h: u32, elems: impl IntoIterator<Item = u32>) -> Subgroup {
    // triangular phase: distinct leading bits, kept in descending order
    let mut basis: Vec<u32> = Vec::new();
    for mut v in elems {
        for &b in &basis {
            if v >> leading_bit(b) & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            let pos = basis
                .iter()
                .position(|&b| leading_bit(b) < leading_bit(v))
                .unwrap_or(basis.len());
            basis.insert(pos, v);
        }
    }
    // backward pass: clear later pivots out of earlier vectors
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let p = leading_bit(basis[j]);
            if basis[i] >> p & 1 == 1 {
                basis[i] ^= basis[j];
            }
        }
    }
    Subgroup { h, basis }
}

/// Canonical echelon span of a list of field elements.
pub fn span(h: u32, elems: &[FieldElement]) -> Subgroup {
    span_bits(h, elems.iter().map(|e| e.bits()))
}

/// Rank of a list equals its length exactly when it is F2-independent.
pub fn independent(h: u32, elems: &[FieldElement]) -> bool {
    span(h, elems).rank() == elems.len()
}

/// The orthogonal complement under the bilinear form (x,y) -> Tr(xy).
pub fn trace_dual(ctx: &FieldCtx, s: &Subgroup) -> Subgroup {
    let h = ctx.h();
    // row per basis vector b: the linear form y -> Tr(b*y) in the
    // coordinates of y; entry j is Tr(b * z^j).
    let rows: Vec<u32> = s
        .basis()
        .iter()
        .map(|&b| {
            let mut row = 0u32;
            for j in 0..h {
                if ctx.trace_abs(ctx.mul(b, ctx.el(1 << j))) == 1 {
                    row |= 1 << j;
                }
            }
            row
        })
        .collect();
    span_bits(h, kernel_basis(h, &rows))
}

/// Nullspace basis of a bit matrix whose rows are masks over h columns.
fn kernel_basis(h: u32, rows: &[u32]) -> Vec<u32> {
    let mut rows = rows.to_vec();
    let mut pivot_cols: Vec<u32> = Vec::new();
    let mut echelon: Vec<u32> = Vec::new();
    for col in (0..h).rev() {
        if let Some(idx) = rows.iter().position(|&r| r >> col & 1 == 1) {
            let pivot = rows.swap_remove(idx);
            for r in rows.iter_mut().chain(echelon.iter_mut()) {
                if *r >> col & 1 == 1 {
                    *r ^= pivot;
                }
            }
            echelon.push(pivot);
            pivot_cols.push(col);
        }
    }
    let mut kernel = Vec::new();
    for free in (0..h).rev().filter(|c| !pivot_cols.contains(c)) {
        let mut v = 1u32 << free;
        for (row, &pc) in echelon.iter().zip(&pivot_cols) {
            if row >> free & 1 == 1 {
                v |= 1 << pc;
            }
        }
        kernel.push(v);
    }
    kernel
}

/// Least x with Tr(alpha_i * x) = target_i for every i. The alphas must be
/// F2-independent; the full solution set is x + trace_dual(span(alphas)).
pub fn solve_trace_system(
    ctx: &FieldCtx,
    alphas: &[FieldElement],
    targets: &[u8],
) -> Result<FieldElement> {
    if alphas.len() != targets.len() || alphas.len() > ctx.h() as usize {
        return Err(Error::Argument(format!(
            "{} constraints with {} targets in GF(2^{})",
            alphas.len(),
            targets.len(),
            ctx.h()
        )));
    }
    if !independent(ctx.h(), alphas) {
        return Err(Error::RankError {
            rank: span(ctx.h(), alphas).rank(),
            expected: alphas.len(),
        });
    }
    let h = ctx.h();
    // augmented rows: h coefficient bits plus the target in bit h
    let mut rows: Vec<u32> = alphas
        .iter()
        .zip(targets)
        .map(|(&a, &t)| {
            let mut row = 0u32;
            for j in 0..h {
                if ctx.trace_abs(ctx.mul(a, ctx.el(1 << j))) == 1 {
                    row |= 1 << j;
                }
            }
            row | (u32::from(t & 1) << h)
        })
        .collect();
    let mut pivots: Vec<(u32, u32)> = Vec::new();
    for col in (0..h).rev() {
        if let Some(idx) = rows.iter().position(|&r| r >> col & 1 == 1) {
            let pivot = rows.swap_remove(idx);
            for r in rows.iter_mut() {
                if *r >> col & 1 == 1 {
                    *r ^= pivot;
                }
            }
            for (_, r) in pivots.iter_mut() {
                if *r >> col & 1 == 1 {
                    *r ^= pivot;
                }
            }
            pivots.push((col, pivot));
        }
    }
    debug_assert!(
        rows.iter().all(|&r| r >> h & 1 == 0),
        "independent trace forms are always jointly satisfiable"
    );
    let mut x = 0u32;
    for &(col, row) in &pivots {
        if row >> h & 1 == 1 {
            x |= 1 << col;
        }
    }
    let dual = trace_dual(ctx, &span(h, alphas));
    Ok(dual.coset_leader(ctx.el(x)))
}

/// True when `values` is empty or a coset of S (the empty case follows the
/// "either empty or a coset" convention of the secant-section criterion).
pub fn is_coset(values: &[FieldElement], s: &Subgroup) -> bool {
    if values.is_empty() {
        return true;
    }
    let mut seen: Vec<FieldElement> = values.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() as u64 != s.size() {
        return false;
    }
    let v0 = seen[0];
    seen.iter().all(|&v| s.contains(v + v0))
}

/// All rank-r subgroups of GF(2^h): pick the pivot columns, then every
/// assignment of the free positions below each pivot. Each basis comes out
/// in canonical echelon form exactly once.
pub fn enumerate_subgroups(h: u32, rank: usize) -> Vec<Subgroup> {
    let mut out = Vec::new();
    for mask in 0u32..1 << h {
        if mask.count_ones() as usize != rank {
            continue;
        }
        let pivots: Vec<u32> = (0..h).rev().filter(|&c| mask >> c & 1 == 1).collect();
        let free_slots: Vec<Vec<u32>> = pivots
            .iter()
            .map(|&p| (0..p).filter(|c| mask >> c & 1 == 0).collect())
            .collect();
        let total_free: u32 = free_slots.iter().map(|f| f.len() as u32).sum();
        for fill in 0u64..1 << total_free {
            let mut basis = Vec::with_capacity(rank);
            let mut cursor = 0;
            for (i, &p) in pivots.iter().enumerate() {
                let mut v = 1u32 << p;
                for &f in &free_slots[i] {
                    if fill >> cursor & 1 == 1 {
                        v |= 1 << f;
                    }
                    cursor += 1;
                }
                basis.push(v);
            }
            out.push(Subgroup { h, basis });
        }
    }
    out
}
