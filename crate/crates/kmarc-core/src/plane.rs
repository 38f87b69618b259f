//! The incidence geometry PG(2,q): normalized homogeneous points and lines,
//! joins and meets, and canonical enumeration.
//!
//! Points and lines are triples over GF(2^h) normalized so the first nonzero
//! coordinate is 1; equal objects are bit-identical. Canonical indices follow
//! the lexicographic order of the normalized triples, so index 0 is (0,0,1),
//! indices 1..=q are (0,1,z), and the rest are (1,y,z).

use crate::error::{Error, Result};
use crate::gf2e::{FieldCtx, FieldElement};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ProjPoint {
    coords: [FieldElement; 3],
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ProjLine {
    coeffs: [FieldElement; 3],
}

fn normalize(ctx: &FieldCtx, mut t: [FieldElement; 3]) -> Result<[FieldElement; 3]> {
    let lead = t
        .iter()
        .position(|c| !c.is_zero())
        .ok_or_else(|| Error::Degenerate("all-zero homogeneous triple".into()))?;
    let inv = ctx.inv(t[lead])?;
    for c in &mut t {
        *c = ctx.mul(*c, inv);
    }
    Ok(t)
}

impl ProjPoint {
    pub fn new(ctx: &FieldCtx, coords: [FieldElement; 3]) -> Result<ProjPoint> {
        Ok(ProjPoint { coords: normalize(ctx, coords)? })
    }

    pub fn coords(&self) -> [FieldElement; 3] {
        self.coords
    }

    /// Canonical index in the lex enumeration of all q^2+q+1 points.
    pub fn index(&self, ctx: &FieldCtx) -> u64 {
        let q = ctx.q() as u64;
        let [x, y, z] = self.coords;
        if x.is_zero() {
            if y.is_zero() {
                0
            } else {
                1 + z.bits() as u64
            }
        } else {
            1 + q + y.bits() as u64 * q + z.bits() as u64
        }
    }
}

impl ProjLine {
    pub fn new(ctx: &FieldCtx, coeffs: [FieldElement; 3]) -> Result<ProjLine> {
        Ok(ProjLine { coeffs: normalize(ctx, coeffs)? })
    }

    pub fn coeffs(&self) -> [FieldElement; 3] {
        self.coeffs
    }

    pub fn index(&self, ctx: &FieldCtx) -> u64 {
        let q = ctx.q() as u64;
        let [a, b, c] = self.coeffs;
        if a.is_zero() {
            if b.is_zero() {
                0
            } else {
                1 + c.bits() as u64
            }
        } else {
            1 + q + b.bits() as u64 * q + c.bits() as u64
        }
    }
}

pub fn num_points(ctx: &FieldCtx) -> u64 {
    let q = ctx.q() as u64;
    q * q + q + 1
}

pub fn incident(ctx: &FieldCtx, p: &ProjPoint, l: &ProjLine) -> bool {
    let [x0, x1, x2] = p.coords;
    let [a0, a1, a2] = l.coeffs;
    (ctx.mul(a0, x0) + ctx.mul(a1, x1) + ctx.mul(a2, x2)).is_zero()
}

/// Cross product; in characteristic 2 subtraction is addition.
fn cross(ctx: &FieldCtx, p: [FieldElement; 3], q: [FieldElement; 3]) -> [FieldElement; 3] {
    [
        ctx.mul(p[1], q[2]) + ctx.mul(p[2], q[1]),
        ctx.mul(p[2], q[0]) + ctx.mul(p[0], q[2]),
        ctx.mul(p[0], q[1]) + ctx.mul(p[1], q[0]),
    ]
}

/// The unique line through two distinct points.
pub fn line_through(ctx: &FieldCtx, p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine> {
    if p == q {
        return Err(Error::Degenerate("join of a point with itself".into()));
    }
    ProjLine::new(ctx, cross(ctx, p.coords, q.coords))
}

/// The unique common point of two distinct lines.
pub fn meet(ctx: &FieldCtx, l: &ProjLine, m: &ProjLine) -> Result<ProjPoint> {
    if l == m {
        return Err(Error::Degenerate("meet of a line with itself".into()));
    }
    ProjPoint::new(ctx, cross(ctx, l.coeffs, m.coeffs))
}

/// The q+1 points of a line, in canonical sorted order.
pub fn points_on_line(ctx: &FieldCtx, l: &ProjLine) -> Vec<ProjPoint> {
    let [a, b, c] = l.coeffs;
    let mut pts = Vec::with_capacity(ctx.q() as usize + 1);
    // P = (0,0,1)
    if c.is_zero() {
        pts.push(ProjPoint { coords: [ctx.zero(), ctx.zero(), ctx.one()] });
    }
    // P = (0,1,z): b + cz = 0
    if !c.is_zero() {
        let z = ctx.div(b, c).unwrap();
        pts.push(ProjPoint { coords: [ctx.zero(), ctx.one(), z] });
    } else if b.is_zero() {
        for z in ctx.elements() {
            pts.push(ProjPoint { coords: [ctx.zero(), ctx.one(), z] });
        }
    }
    // P = (1,y,z): a + by + cz = 0
    if !c.is_zero() {
        for y in ctx.elements() {
            let z = ctx.div(a + ctx.mul(b, y), c).unwrap();
            pts.push(ProjPoint { coords: [ctx.one(), y, z] });
        }
    } else if !b.is_zero() {
        let y = ctx.div(a, b).unwrap();
        for z in ctx.elements() {
            pts.push(ProjPoint { coords: [ctx.one(), y, z] });
        }
    }
    pts.sort_unstable();
    debug_assert_eq!(pts.len(), ctx.q() as usize + 1);
    pts
}

/// Lazy canonical (lex) enumeration of all points.
pub fn points_iter(ctx: &FieldCtx) -> impl Iterator<Item = ProjPoint> + '_ {
    let inf = std::iter::once(ProjPoint { coords: [ctx.zero(), ctx.zero(), ctx.one()] });
    let vertical = ctx
        .elements()
        .map(|z| ProjPoint { coords: [ctx.zero(), ctx.one(), z] });
    let affine = ctx.elements().flat_map(move |y| {
        ctx.elements()
            .map(move |z| ProjPoint { coords: [ctx.one(), y, z] })
    });
    inf.chain(vertical).chain(affine)
}

/// All q^2+q+1 points in canonical (lex) order.
pub fn all_points(ctx: &FieldCtx) -> Vec<ProjPoint> {
    let mut pts = Vec::with_capacity(num_points(ctx) as usize);
    pts.push(ProjPoint { coords: [ctx.zero(), ctx.zero(), ctx.one()] });
    for z in ctx.elements() {
        pts.push(ProjPoint { coords: [ctx.zero(), ctx.one(), z] });
    }
    for y in ctx.elements() {
        for z in ctx.elements() {
            pts.push(ProjPoint { coords: [ctx.one(), y, z] });
        }
    }
    pts
}

/// All q^2+q+1 lines in canonical (lex) order of their coefficient triples.
pub fn all_lines(ctx: &FieldCtx) -> Vec<ProjLine> {
    all_points(ctx)
        .into_iter()
        .map(|p| ProjLine { coeffs: p.coords })
        .collect()
}
