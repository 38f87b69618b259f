//! Every arc-producing procedure: the relative-trace lift of a hyperoval,
//! the three direct-complement lifts, the five-trace-set q/4 family, the
//! coset families of types q/8 and q/16, the Lunelli-Sce hyperoval, and the
//! exhaustive admissible-tuple search for the q/16 family.
//!
//! Every constructor validates its output by a full line census; a formula
//! bug can therefore not produce a silently wrong arc.

use std::collections::HashSet;

use crate::arcs::KMArc;
use crate::error::{Error, Result};
use crate::f2linalg::{independent, solve_trace_system, span, trace_dual, Subgroup};
use crate::gf2e::{FieldCtx, FieldElement};
use crate::plane::ProjPoint;

/// x+y+z+yz, y+z+xz, z+xy over F2; the coset-selector functions of the q/8
/// and q/16 families.
pub fn coset_selectors(l: [u8; 3]) -> [u8; 3] {
    let [x, y, z] = [l[0] & 1, l[1] & 1, l[2] & 1];
    [
        x ^ y ^ z ^ (y & z),
        y ^ z ^ (x & z),
        z ^ (x & y),
    ]
}

fn pt(ctx: &FieldCtx, x: FieldElement, y: FieldElement, z: FieldElement) -> ProjPoint {
    ProjPoint::new(ctx, [x, y, z]).expect("nonzero triple")
}

fn affine_pt(ctx: &FieldCtx, y: FieldElement, z: FieldElement) -> ProjPoint {
    pt(ctx, ctx.one(), y, z)
}

/// Completion of an affine point set on the line X = 0: the points of X = 0
/// every other line through which meets the affine set at most once. For
/// (0,1,z0) that means the values z + z0*y over affine points (1,y,z) are
/// pairwise distinct; for (0,0,1) the y values must be pairwise distinct
/// (that candidate only survives when the result is a hyperoval).
fn complete_on_x0(ctx: &FieldCtx, affine: &[(FieldElement, FieldElement)]) -> Vec<ProjPoint> {
    let q = ctx.q() as usize;
    let mut out = Vec::new();
    let mut stamp = vec![u32::MAX; q];
    for z0 in ctx.elements() {
        let mark = z0.bits();
        let mut injective = true;
        for &(y, z) in affine {
            let c = (z + ctx.mul(z0, y)).bits() as usize;
            if stamp[c] == mark {
                injective = false;
                break;
            }
            stamp[c] = mark;
        }
        if injective {
            out.push(pt(ctx, ctx.zero(), ctx.one(), z0));
        }
    }
    let mut seen = vec![false; q];
    if affine.iter().all(|&(y, _)| !std::mem::replace(&mut seen[y.bits() as usize], true)) {
        out.push(pt(ctx, ctx.zero(), ctx.zero(), ctx.one()));
    }
    out
}

fn assemble(
    ctx: &FieldCtx,
    affine: Vec<(FieldElement, FieldElement)>,
    on_x0: Vec<ProjPoint>,
    expected_t: u32,
) -> Result<KMArc> {
    let mut points: Vec<ProjPoint> =
        affine.iter().map(|&(y, z)| affine_pt(ctx, y, z)).collect();
    points.extend(on_x0);
    let arc = KMArc::from_points(ctx, points)
        .map_err(|e| Error::Construction(e.to_string()))?;
    if arc.t() != expected_t {
        return Err(Error::Construction(format!(
            "census found type {} instead of {expected_t}",
            arc.t()
        )));
    }
    Ok(arc)
}

// ---------------------------------------------------------------------------
// o-polynomials
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OPolyKind {
    /// x -> x^(2^n) with gcd(n, h') = 1 (translation hyperovals).
    Monomial(u32),
    LunelliSce,
    Explicit,
}

/// An o-polynomial g over GF(2^h'): the set {(1,g(x),x)} plus (0,1,0) and
/// (0,0,1) is a hyperoval in PG(2,2^h'), verified by census at construction.
#[derive(Clone, Debug)]
pub struct OPolynomial {
    h_prime: u32,
    table: Vec<FieldElement>,
    kind: OPolyKind,
}

impl OPolynomial {
    pub fn h_prime(&self) -> u32 {
        self.h_prime
    }

    pub fn kind(&self) -> &OPolyKind {
        &self.kind
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        self.table[x.bits() as usize]
    }

    pub fn hyperoval(&self, small: &FieldCtx) -> Result<KMArc> {
        let mut points: Vec<ProjPoint> = small
            .elements()
            .map(|x| affine_pt(small, self.eval(x), x))
            .collect();
        points.push(pt(small, small.zero(), small.one(), small.zero()));
        points.push(pt(small, small.zero(), small.zero(), small.one()));
        let arc =
            KMArc::from_points(small, points).map_err(|e| Error::Construction(e.to_string()))?;
        if !arc.is_hyperoval() {
            return Err(Error::Construction("o-polynomial census is not a hyperoval".into()));
        }
        Ok(arc)
    }

    fn validated(small: &FieldCtx, table: Vec<FieldElement>, kind: OPolyKind) -> Result<OPolynomial> {
        let g = OPolynomial { h_prime: small.h(), table, kind };
        g.hyperoval(small)?;
        Ok(g)
    }

    pub fn monomial(small: &FieldCtx, n: u32) -> Result<OPolynomial> {
        if gcd(n, small.h()) != 1 {
            return Err(Error::Argument(format!(
                "x -> x^(2^{n}) needs gcd(n, {}) = 1",
                small.h()
            )));
        }
        let table = small.elements().map(|x| small.frobenius(x, n)).collect();
        OPolynomial::validated(small, table, OPolyKind::Monomial(n))
    }

    /// The Lunelli-Sce hyperoval of PG(2,16) rewritten as an o-polynomial:
    /// swap the last two coordinates of the defining point set and shear so
    /// the two extra points land on (0,1,0) and (0,0,1).
    pub fn lunelli_sce(small: &FieldCtx) -> Result<OPolynomial> {
        if small.h() != 4 || small.modulus() != 0x13 {
            return Err(Error::Argument(
                "the Lunelli-Sce o-polynomial lives in GF(16) with z^4 = z + 1".into(),
            ));
        }
        let mut table = vec![FieldElement::ZERO; 16];
        for (u, v) in lunelli_sce_graph(small) {
            table[u.bits() as usize] = u + v;
        }
        OPolynomial::validated(small, table, OPolyKind::LunelliSce)
    }

    pub fn explicit(small: &FieldCtx, table: Vec<FieldElement>) -> Result<OPolynomial> {
        if table.len() != small.q() as usize {
            return Err(Error::Argument("o-polynomial table must cover the field".into()));
        }
        OPolynomial::validated(small, table, OPolyKind::Explicit)
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The 16 affine points of the Lunelli-Sce hyperoval as (y, z) pairs:
/// y = l1*zeta + l2*zeta^2 + l3*zeta^3 + l4 and z = sum of the coset
/// selectors against zeta^2, zeta, 1.
fn lunelli_sce_graph(ctx: &FieldCtx) -> Vec<(FieldElement, FieldElement)> {
    let zeta = ctx.el(0b10);
    let mut out = Vec::with_capacity(16);
    for bits in 0..16u32 {
        let l = [bits & 1, bits >> 1 & 1, bits >> 2 & 1, bits >> 3 & 1];
        let mut y = FieldElement::ZERO;
        for i in 0..3 {
            if l[i] == 1 {
                y += ctx.pow(zeta, i as u64 + 1);
            }
        }
        if l[3] == 1 {
            y += ctx.one();
        }
        let f = coset_selectors([l[0] as u8, l[1] as u8, l[2] as u8]);
        let mut z = FieldElement::ZERO;
        for i in 0..3 {
            // f_{i+1} pairs with zeta^(3-(i+1))
            if f[i] == 1 {
                z += ctx.pow(zeta, 2 - i as u64);
            }
        }
        out.push((y, z));
    }
    out
}

/// The Lunelli-Sce hyperoval of PG(2,16): the 16 graph points together with
/// (0,1,1) and (0,0,1).
pub fn lunelli_sce(ctx: &FieldCtx) -> Result<KMArc> {
    if ctx.h() != 4 || ctx.modulus() != 0x13 {
        return Err(Error::Argument(
            "the Lunelli-Sce hyperoval lives in GF(16) with z^4 = z + 1".into(),
        ));
    }
    let mut points: Vec<ProjPoint> = lunelli_sce_graph(ctx)
        .into_iter()
        .map(|(y, z)| affine_pt(ctx, y, z))
        .collect();
    points.push(pt(ctx, ctx.zero(), ctx.one(), ctx.one()));
    points.push(pt(ctx, ctx.zero(), ctx.zero(), ctx.one()));
    let arc = KMArc::from_points(ctx, points).map_err(|e| Error::Construction(e.to_string()))?;
    if !arc.is_hyperoval() {
        return Err(Error::Construction("Lunelli-Sce census failed".into()));
    }
    Ok(arc)
}

// ---------------------------------------------------------------------------
// relative-trace lift (type 2^i from an o-polynomial over the subfield)
// ---------------------------------------------------------------------------

/// Lift an o-polynomial over GF(2^(h-i)) to a KM-arc of type 2^i in PG(2,2^h)
/// via the relative trace: affine points (1, g(L(x)), x), completed on X = 0.
/// Requires h-i | h and 2^(h-i) > 2.
pub fn construct_km(
    big: &FieldCtx,
    small: &FieldCtx,
    i: u32,
    g: &OPolynomial,
) -> Result<KMArc> {
    let h = big.h();
    if i == 0 || i >= h {
        return Err(Error::Argument(format!("need 0 < i < h, got i = {i}")));
    }
    let hp = h - i;
    if h % hp != 0 {
        return Err(Error::NotADivisor(hp, h));
    }
    if hp < 2 {
        return Err(Error::Argument("subfield of order 2 admits no hyperoval lift".into()));
    }
    if small.h() != hp || g.h_prime() != hp {
        return Err(Error::ContextMismatch);
    }
    let emb = big.subfield_embedding(small)?;
    let mut affine = Vec::with_capacity(big.q() as usize);
    for x in big.elements() {
        let l = big.trace_rel(x, hp)?;
        let v = emb.unmap(l).expect("relative trace lands in the subfield");
        let y = emb.map(g.eval(v));
        affine.push((y, x));
    }
    let on_x0 = complete_on_x0(big, &affine);
    if on_x0.len() != 1 << i {
        return Err(Error::Construction(format!(
            "completion found {} points on X=0, expected {}",
            on_x0.len(),
            1 << i
        )));
    }
    assemble(big, affine, on_x0, 1 << i)
}

// ---------------------------------------------------------------------------
// direct-complement lifts
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GwVariant {
    /// base hyperoval containing (0,0,1): type q^(m-1) in PG(2,q^m)
    A,
    /// base hyperoval avoiding (0,0,1): type 2q^(m-1)
    B,
    /// base KM-arc of type t with nucleus (0,0,1): type t*q^(m-1)
    C,
}

/// The canonical direct complement of the subfield of order 2^h' inside the
/// big field: I = {x : L(kx) = 0} for the least k with L(k) = 1.
pub fn canonical_complement(big: &FieldCtx, h_prime: u32) -> Result<(FieldElement, Vec<FieldElement>)> {
    let k = big
        .elements()
        .find(|&k| big.trace_rel(k, h_prime).unwrap() == big.one())
        .expect("the relative trace is onto");
    let members = complement_from_k(big, h_prime, k)?;
    Ok((k, members))
}

/// Direct complement cut out by a chosen k with L(k) = 1.
pub fn complement_from_k(
    big: &FieldCtx,
    h_prime: u32,
    k: FieldElement,
) -> Result<Vec<FieldElement>> {
    if big.trace_rel(k, h_prime)? != big.one() {
        return Err(Error::Argument("complement parameter must have relative trace 1".into()));
    }
    Ok(big
        .elements()
        .filter(|&x| big.trace_rel(big.mul(k, x), h_prime).unwrap().is_zero())
        .collect())
}

/// Lift a base hyperoval or KM-arc of PG(2,q) into PG(2,q^m) by translating
/// its affine part with a direct complement, then completing on X = 0.
pub fn construct_gw(
    big: &FieldCtx,
    small: &FieldCtx,
    base: &KMArc,
    variant: GwVariant,
) -> Result<KMArc> {
    construct_gw_with_complement(big, small, base, variant, None)
}

pub fn construct_gw_with_complement(
    big: &FieldCtx,
    small: &FieldCtx,
    base: &KMArc,
    variant: GwVariant,
    complement_k: Option<FieldElement>,
) -> Result<KMArc> {
    let hp = small.h();
    if big.h() % hp != 0 || big.h() == hp {
        return Err(Error::NotADivisor(hp, big.h()));
    }
    let m = big.h() / hp;
    let origin = pt(small, small.zero(), small.zero(), small.one());
    match variant {
        GwVariant::A => {
            if !base.is_hyperoval() || !base.contains(&origin) {
                return Err(Error::Argument(
                    "variant A needs a hyperoval through (0,0,1)".into(),
                ));
            }
        }
        GwVariant::B => {
            if !base.is_hyperoval() || base.contains(&origin) {
                return Err(Error::Argument(
                    "variant B needs a hyperoval avoiding (0,0,1)".into(),
                ));
            }
        }
        GwVariant::C => {
            if base.t() > 2 {
                if base.nucleus() != Some(origin) {
                    return Err(Error::Argument(
                        "variant C needs the base nucleus at (0,0,1)".into(),
                    ));
                }
            } else if base.contains(&origin) {
                return Err(Error::Argument(
                    "variant C on a hyperoval needs (0,0,1) off the base".into(),
                ));
            }
        }
    }
    let q_small = small.q() as u64;
    let expected_t = match variant {
        GwVariant::A => q_small.pow(m - 1),
        GwVariant::B => 2 * q_small.pow(m - 1),
        GwVariant::C => base.t() as u64 * q_small.pow(m - 1),
    };
    let expected_t = u32::try_from(expected_t)
        .map_err(|_| Error::Argument("lifted type exceeds the supported field range".into()))?;

    let emb = big.subfield_embedding(small)?;
    let complement = match complement_k {
        Some(k) => complement_from_k(big, hp, k)?,
        None => canonical_complement(big, hp)?.1,
    };
    let mut affine = Vec::new();
    for p in base.points() {
        let [x, y, z] = p.coords();
        if x.is_zero() {
            continue;
        }
        let (yy, zz) = (emb.map(y), emb.map(z));
        for &i in &complement {
            affine.push((yy, zz + i));
        }
    }
    let on_x0 = complete_on_x0(big, &affine);
    let needed = big.q() as usize + expected_t as usize - affine.len();
    if on_x0.len() != needed {
        return Err(Error::Construction(format!(
            "completion found {} points on X=0, expected {}",
            on_x0.len(),
            needed
        )));
    }
    assemble(big, affine, on_x0, expected_t)
}

// ---------------------------------------------------------------------------
// the q/4 family (five trace-condition sets)
// ---------------------------------------------------------------------------

/// KM-arc of type q/4 from the five trace-condition sets with parameters
/// alpha, beta (outside {0,1}, alpha*beta != 1) and a, b in F2.
pub fn construct_q4(
    ctx: &FieldCtx,
    alpha: FieldElement,
    beta: FieldElement,
    a: u8,
    b: u8,
) -> Result<KMArc> {
    let q = ctx.q();
    if q < 8 {
        return Err(Error::Argument("the q/4 family needs q >= 8".into()));
    }
    let one = ctx.one();
    if alpha.is_zero() || alpha == one || beta.is_zero() || beta == one {
        return Err(Error::Argument("alpha and beta must avoid {0,1}".into()));
    }
    if ctx.mul(alpha, beta) == one {
        return Err(Error::Argument("alpha*beta = 1 is excluded".into()));
    }
    let (a, b) = (a & 1, b & 1);
    let gamma = ctx.div(beta + one, ctx.mul(alpha, beta) + one)?;
    let xi = ctx.mul(ctx.mul(alpha, beta), gamma);

    let tr_quot = |z: FieldElement, d: FieldElement| ctx.trace_abs(ctx.div(z, d).unwrap());
    let mut points = Vec::with_capacity(q as usize + q as usize / 4);
    for z in ctx.elements() {
        // on X = 0: Tr(z) = 0 and Tr(z/alpha) = a
        if ctx.trace_abs(z) == 0 && tr_quot(z, alpha) == a {
            points.push(pt(ctx, ctx.zero(), one, z));
        }
        // on Y = 0: Tr(z) = 0 and Tr(z/(alpha*gamma)) = 0
        if ctx.trace_abs(z) == 0 && tr_quot(z, ctx.mul(alpha, gamma)) == 0 {
            points.push(affine_pt(ctx, ctx.zero(), z));
        }
        // on Y = X: Tr(z) = 1 and Tr(z/(alpha*beta)) = b
        if ctx.trace_abs(z) == 1 && tr_quot(z, ctx.mul(alpha, beta)) == b {
            points.push(affine_pt(ctx, one, z));
        }
        // on Y = gamma*X: Tr(z/(alpha*gamma)) = a+1 and Tr(z/xi) = b+1
        if tr_quot(z, ctx.mul(alpha, gamma)) == a ^ 1 && tr_quot(z, xi) == b ^ 1 {
            points.push(affine_pt(ctx, gamma, z));
        }
        // on Y = (beta+1)*X: Tr(z/(alpha*beta)) = a+b+1 and Tr(z/xi) = b
        if tr_quot(z, ctx.mul(alpha, beta)) == a ^ b ^ 1 && tr_quot(z, xi) == b {
            points.push(affine_pt(ctx, beta + one, z));
        }
    }
    let arc = KMArc::from_points(ctx, points).map_err(|e| Error::Construction(e.to_string()))?;
    if arc.t() != q / 4 {
        return Err(Error::Construction(format!(
            "census found type {} instead of {}",
            arc.t(),
            q / 4
        )));
    }
    Ok(arc)
}

/// The translation criterion of the q/4 family: the five values of alpha for
/// which the arc with parameters (alpha, beta) is a translation arc.
pub fn q4_translation_alphas(ctx: &FieldCtx, beta: FieldElement) -> Result<[FieldElement; 5]> {
    let one = ctx.one();
    Ok([
        ctx.inv(ctx.square(beta))?,
        one + ctx.inv(beta)?,
        beta,
        ctx.inv(ctx.sqrt(beta))?,
        ctx.inv(beta + one)?,
    ])
}

// ---------------------------------------------------------------------------
// the q/8 family
// ---------------------------------------------------------------------------

/// Elation KM-arc of type q/8 (a hyperoval when q = 16) from an
/// F2-independent triple of nonzero field elements.
pub fn construct_q8(ctx: &FieldCtx, alphas: [FieldElement; 3]) -> Result<KMArc> {
    if ctx.h() < 4 {
        return Err(Error::Argument("the q/8 family needs q >= 16".into()));
    }
    if alphas.iter().any(|a| a.is_zero()) || !independent(ctx.h(), &alphas) {
        return Err(Error::Argument("alphas must be nonzero and F2-independent".into()));
    }
    let s = trace_dual(ctx, &span(ctx.h(), &alphas)).enumerate()?;
    let betas: Vec<FieldElement> = (0..3)
        .map(|j| {
            let mut targets = [0u8; 3];
            targets[j] = 1;
            solve_trace_system(ctx, &alphas, &targets)
        })
        .collect::<Result<_>>()?;

    let mut points = Vec::with_capacity(ctx.q() as usize + ctx.q() as usize / 8);
    for bits in 0..8u32 {
        let l = [(bits & 1) as u8, (bits >> 1 & 1) as u8, (bits >> 2 & 1) as u8];
        let f = coset_selectors(l);
        let mut y = FieldElement::ZERO;
        let mut z0 = FieldElement::ZERO;
        for i in 0..3 {
            if l[i] == 1 {
                y += alphas[i];
            }
            if f[i] == 1 {
                z0 += betas[i];
            }
        }
        for &sv in &s {
            points.push(affine_pt(ctx, y, z0 + sv));
        }
    }
    let squares: Vec<FieldElement> = alphas.iter().map(|&a| ctx.square(a)).collect();
    for x in trace_dual(ctx, &span(ctx.h(), &squares)).enumerate()? {
        points.push(pt(ctx, ctx.zero(), ctx.one(), x));
    }
    let arc = KMArc::from_points(ctx, points).map_err(|e| Error::Construction(e.to_string()))?;
    if arc.t() != ctx.q() / 8 {
        return Err(Error::Construction(format!(
            "census found type {} instead of {}",
            arc.t(),
            ctx.q() / 8
        )));
    }
    Ok(arc)
}

// ---------------------------------------------------------------------------
// the q/16 family
// ---------------------------------------------------------------------------

/// A quadruple satisfying the q/16 admissibility conditions, with the
/// derived data used by the construction.
#[derive(Clone, Debug)]
pub struct AdmissibleTuple {
    pub alphas: [FieldElement; 4],
    pub span: Subgroup,
    /// kernel subgroup S of the four trace conditions
    pub s: Subgroup,
    pub betas: [FieldElement; 3],
    /// the auxiliary element selected for the section on X = 0
    pub alpha: FieldElement,
}

impl AdmissibleTuple {
    pub fn new(ctx: &FieldCtx, alphas: [FieldElement; 4]) -> Result<AdmissibleTuple> {
        if alphas.iter().any(|a| a.is_zero()) {
            return Err(Error::Inadmissible("a zero entry".into()));
        }
        if !independent(ctx.h(), &alphas) {
            return Err(Error::Inadmissible("entries are F2-dependent".into()));
        }
        let sp = span(ctx.h(), &alphas);
        for (i, &ai) in alphas.iter().take(3).enumerate() {
            let v = ctx.div(ctx.square(ai), alphas[3])?;
            if !sp.contains(v) {
                return Err(Error::Inadmissible(format!(
                    "alpha_{}^2/alpha_4 escapes the span",
                    i + 1
                )));
            }
        }
        let alpha = select_alpha_q16(ctx, alphas)?;
        let betas: [FieldElement; 3] = std::array::from_fn(|j| {
            let mut targets = [0u8; 4];
            targets[j] = 1;
            solve_trace_system(ctx, &alphas, &targets).expect("independent alphas")
        });
        let s = trace_dual(ctx, &sp);
        Ok(AdmissibleTuple { alphas, span: sp, s, betas, alpha })
    }
}

/// Coordinates of x in an F2-independent basis, if x lies in its span.
fn coords_in_basis(h: u32, basis: &[FieldElement], x: FieldElement) -> Option<Vec<u8>> {
    // gaussian elimination on the basis augmented with coordinate tags
    let n = basis.len();
    let mut rows: Vec<(u32, u32)> = basis
        .iter()
        .enumerate()
        .map(|(i, b)| (b.bits(), 1u32 << i))
        .collect();
    let mut v = (x.bits(), 0u32);
    let _ = h;
    // triangularize
    rows.sort_unstable_by(|a, b| b.0.cmp(&a.0));
    let mut reduced: Vec<(u32, u32)> = Vec::new();
    for &(mut val, mut tag) in &rows {
        for &(rv, rt) in &reduced {
            let lead = 31 - rv.leading_zeros();
            if val >> lead & 1 == 1 {
                val ^= rv;
                tag ^= rt;
            }
        }
        if val != 0 {
            reduced.push((val, tag));
            reduced.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        }
    }
    if reduced.len() != n {
        return None;
    }
    for &(rv, rt) in &reduced {
        let lead = 31 - rv.leading_zeros();
        if v.0 >> lead & 1 == 1 {
            v.0 ^= rv;
            v.1 ^= rt;
        }
    }
    if v.0 != 0 {
        return None;
    }
    Some((0..n).map(|i| (v.1 >> i & 1) as u8).collect())
}

/// The least coefficient vector (b1..b4) making
/// {a1(a1+a4), a2(a2+a4), a3(a3+a4), a4*alpha} F2-independent, encoded with
/// b1 as the most significant position. The choice never changes the
/// constructed arc.
pub fn select_alpha_q16(ctx: &FieldCtx, alphas: [FieldElement; 4]) -> Result<FieldElement> {
    let mut rows = Vec::with_capacity(3);
    for (i, &ai) in alphas.iter().take(3).enumerate() {
        let v = ctx.div(ctx.square(ai), alphas[3])?;
        let mut coords = coords_in_basis(ctx.h(), &alphas, v)
            .ok_or_else(|| Error::Inadmissible("alpha_i^2/alpha_4 escapes the span".into()))?;
        coords[i] ^= 1;
        let mask: u32 = coords
            .iter()
            .enumerate()
            .map(|(j, &c)| u32::from(c) << (3 - j))
            .sum();
        rows.push(mask);
    }
    let hyperplane = span(
        4,
        &rows.iter().map(|&r| FieldElement::from_hex(&format!("{r:x}")).unwrap()).collect::<Vec<_>>(),
    );
    for b in 1u32..16 {
        if !hyperplane.contains(FieldElement::from_hex(&format!("{b:x}")).unwrap()) {
            let mut alpha = FieldElement::ZERO;
            for j in 0..4 {
                if b >> (3 - j) & 1 == 1 {
                    alpha += alphas[j];
                }
            }
            let check = [
                ctx.mul(alphas[0], alphas[0] + alphas[3]),
                ctx.mul(alphas[1], alphas[1] + alphas[3]),
                ctx.mul(alphas[2], alphas[2] + alphas[3]),
                ctx.mul(alphas[3], alpha),
            ];
            if !independent(ctx.h(), &check) {
                return Err(Error::Inadmissible(
                    "selected alpha fails the independence condition".into(),
                ));
            }
            return Ok(alpha);
        }
    }
    Err(Error::Inadmissible("no coefficient vector escapes the hyperplane".into()))
}

/// The raw point set of the q/16 construction; exposed separately so the
/// degenerate q = 16 evaluation (17 points completing to a hyperoval) can be
/// exercised directly.
pub fn q16_point_set(ctx: &FieldCtx, tuple: &AdmissibleTuple) -> Result<Vec<ProjPoint>> {
    let alphas = tuple.alphas;
    let s = tuple.s.enumerate()?;
    let mut points = Vec::new();
    for bits in 0..16u32 {
        let l4 = [(bits & 1) as u8, (bits >> 1 & 1) as u8, (bits >> 2 & 1) as u8, (bits >> 3 & 1) as u8];
        let f = coset_selectors([l4[0], l4[1], l4[2]]);
        let mut y = FieldElement::ZERO;
        for i in 0..4 {
            if l4[i] == 1 {
                y += alphas[i];
            }
        }
        let mut z0 = FieldElement::ZERO;
        for i in 0..3 {
            if f[i] == 1 {
                z0 += tuple.betas[i];
            }
        }
        for &sv in &s {
            points.push(affine_pt(ctx, y, z0 + sv));
        }
    }
    // section on X = 0: Tr(a_i(a_i+a_4)x) = 0 for i = 1,2,3 and Tr(a_4*alpha*x) = 1
    let mus = [
        ctx.mul(alphas[0], alphas[0] + alphas[3]),
        ctx.mul(alphas[1], alphas[1] + alphas[3]),
        ctx.mul(alphas[2], alphas[2] + alphas[3]),
        ctx.mul(alphas[3], tuple.alpha),
    ];
    let x0 = solve_trace_system(ctx, &mus, &[0, 0, 0, 1])?;
    for w in trace_dual(ctx, &span(ctx.h(), &mus)).enumerate()? {
        points.push(pt(ctx, ctx.zero(), ctx.one(), x0 + w));
    }
    Ok(points)
}

/// Elation KM-arc of type q/16 from an admissible quadruple, q = 2^h, h > 5.
pub fn construct_q16(ctx: &FieldCtx, alphas: [FieldElement; 4]) -> Result<KMArc> {
    if ctx.h() <= 5 {
        return Err(Error::Argument("the q/16 family needs q > 32".into()));
    }
    let tuple = AdmissibleTuple::new(ctx, alphas)?;
    let points = q16_point_set(ctx, &tuple)?;
    let arc = KMArc::from_points(ctx, points).map_err(|e| Error::Construction(e.to_string()))?;
    if arc.t() != ctx.q() / 16 {
        return Err(Error::Construction(format!(
            "census found type {} instead of {}",
            arc.t(),
            ctx.q() / 16
        )));
    }
    Ok(arc)
}

// ---------------------------------------------------------------------------
// admissible-tuple search
// ---------------------------------------------------------------------------

/// Close a subgroup under squaring, bailing out once the rank passes 4.
fn squaring_closure(ctx: &FieldCtx, start: &Subgroup) -> Option<Subgroup> {
    let mut current = start.clone();
    loop {
        let mut extended = current.basis();
        for b in current.basis() {
            extended.push(ctx.square(b));
        }
        let next = span(ctx.h(), &extended);
        if next.rank() > 4 {
            return None;
        }
        if next == current {
            return Some(current);
        }
        current = next;
    }
}

/// All rank-4 subgroups containing 1 and closed under squaring, by closure
/// DFS; these are exactly the spans of admissible tuples normalized to
/// alpha_4 = 1.
fn admissible_spans(ctx: &FieldCtx) -> Vec<Subgroup> {
    let one_span = span(ctx.h(), &[ctx.one()]);
    let start = squaring_closure(ctx, &one_span).expect("1 is fixed by squaring");
    let mut states: HashSet<Subgroup> = HashSet::new();
    let mut result: HashSet<Subgroup> = HashSet::new();
    let mut stack = vec![start];
    while let Some(t) = stack.pop() {
        if !states.insert(t.clone()) {
            continue;
        }
        if t.rank() == 4 {
            result.insert(t);
            continue;
        }
        for x in ctx.elements().skip(1) {
            if t.contains(x) {
                continue;
            }
            let mut gens = t.basis();
            gens.push(x);
            if let Some(closed) = squaring_closure(ctx, &span(ctx.h(), &gens)) {
                if !states.contains(&closed) {
                    stack.push(closed);
                }
            }
        }
    }
    let mut out: Vec<Subgroup> = result.into_iter().collect();
    out.sort();
    out
}

/// Canonical form of a span class under T ~ k * T^phi.
fn span_class_key(ctx: &FieldCtx, t: &Subgroup) -> Vec<u32> {
    let mut best: Option<Vec<u32>> = None;
    for k in ctx.elements().skip(1) {
        let scaled = t.scale(ctx, k);
        for phi in 0..ctx.h() {
            let img = scaled.frobenius(ctx, phi);
            let key: Vec<u32> = img.basis().iter().map(|b| b.bits()).collect();
            if best.as_ref().map_or(true, |b| key < *b) {
                best = Some(key);
            }
        }
    }
    best.unwrap()
}

/// Canonical admissible tuples (alpha_1, alpha_2, alpha_3, 1), one per span
/// class under scaling and field automorphisms. Empty exactly when no
/// admissible quadruple exists in GF(2^h).
pub fn admissible_search(ctx: &FieldCtx) -> Vec<AdmissibleTuple> {
    let mut classes: Vec<(Vec<u32>, Subgroup)> = Vec::new();
    for t in admissible_spans(ctx) {
        if !t.contains(ctx.one()) {
            continue;
        }
        let key = span_class_key(ctx, &t);
        if classes.iter().any(|(k, _)| *k == key) {
            continue;
        }
        classes.push((key, t));
    }
    classes.sort();
    let mut out = Vec::new();
    for (_, t) in classes {
        // basis completing 1 to a spanning quadruple
        let mut chosen = vec![ctx.one()];
        for b in t.basis() {
            if chosen.len() == 4 {
                break;
            }
            let mut trial = chosen.clone();
            trial.push(b);
            if independent(ctx.h(), &trial) {
                chosen.push(b);
            }
        }
        debug_assert_eq!(chosen.len(), 4);
        let alphas = [chosen[1], chosen[2], chosen[3], ctx.one()];
        match AdmissibleTuple::new(ctx, alphas) {
            Ok(tuple) => out.push(tuple),
            Err(_) => unreachable!("squaring-closed spans always yield admissible tuples"),
        }
    }
    out
}

/// Affine graph arc helper: the points (1, f(z), z) completed on X = 0 and
/// validated by census (used for explicit maps quoted from classifications).
pub fn explicit_affine_arc(
    ctx: &FieldCtx,
    f: impl Fn(FieldElement) -> FieldElement,
    expected_t: u32,
) -> Result<KMArc> {
    let affine: Vec<(FieldElement, FieldElement)> =
        ctx.elements().map(|z| (f(z), z)).collect();
    let on_x0 = complete_on_x0(ctx, &affine);
    if on_x0.len() != expected_t as usize {
        return Err(Error::Construction(format!(
            "completion found {} points on X=0, expected {}",
            on_x0.len(),
            expected_t
        )));
    }
    assemble(ctx, affine, on_x0, expected_t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs;
    use crate::plane::ProjLine;

    #[test]
    fn q4_at_q8_is_a_hyperoval() {
        let ctx = FieldCtx::new(3).unwrap();
        let (alpha, beta) = (ctx.el(2), ctx.el(4));
        let arc = construct_q4(&ctx, alpha, beta, 0, 0).unwrap();
        assert_eq!(arc.len(), 10);
        assert_eq!(arc.t(), 2);
    }

    #[test]
    fn q4_bad_parameters_rejected() {
        let ctx = FieldCtx::new(4).unwrap();
        assert!(construct_q4(&ctx, ctx.zero(), ctx.el(2), 0, 0).is_err());
        assert!(construct_q4(&ctx, ctx.one(), ctx.el(2), 0, 0).is_err());
        let beta = ctx.el(2);
        let alpha = ctx.inv(beta).unwrap();
        assert!(construct_q4(&ctx, alpha, beta, 0, 0).is_err());
    }

    #[test]
    fn q4_at_q16_has_five_secants_through_origin() {
        let ctx = FieldCtx::new(4).unwrap();
        let beta = ctx.el(2);
        let alpha = ctx.inv(ctx.square(beta)).unwrap();
        let arc = construct_q4(&ctx, alpha, beta, 0, 0).unwrap();
        assert_eq!(arc.t(), 4);
        assert_eq!(arc.len(), 20);
        let n = arc.nucleus().unwrap();
        assert_eq!(n.coords(), [ctx.zero(), ctx.zero(), ctx.one()]);
        assert_eq!(arc.t_secants().len(), 5);
        // (a,b) variants stay KM-arcs of the same type
        for (a, b) in [(0, 1), (1, 0), (1, 1)] {
            assert_eq!(construct_q4(&ctx, alpha, beta, a, b).unwrap().t(), 4);
        }
    }

    #[test]
    fn q8_at_q16_is_a_hyperoval_and_q32_type_4() {
        let ctx = FieldCtx::new(4).unwrap();
        let arc = construct_q8(&ctx, [ctx.el(1), ctx.el(2), ctx.el(4)]).unwrap();
        assert!(arc.is_hyperoval());
        assert_eq!(arc.len(), 18);

        let ctx = FieldCtx::new(5).unwrap();
        let arc = construct_q8(&ctx, [ctx.el(1), ctx.el(2), ctx.el(4)]).unwrap();
        assert_eq!(arc.t(), 4);
        assert_eq!(arc.nucleus().unwrap().coords(), [ctx.zero(), ctx.zero(), ctx.one()]);
        // elation line X = 0 is a t-secant
        let x0 = ProjLine::new(&ctx, [ctx.one(), ctx.zero(), ctx.zero()]).unwrap();
        assert!(arc.t_secants().contains(&x0));
        // dependent alphas rejected
        assert!(construct_q8(&ctx, [ctx.el(1), ctx.el(2), ctx.el(3)]).is_err());
    }

    #[test]
    fn q8_beta_duality_holds() {
        let ctx = FieldCtx::new(6).unwrap();
        let alphas = [ctx.el(0b101), ctx.el(0b10), ctx.el(0b11000)];
        assert!(independent(ctx.h(), &alphas));
        let betas: Vec<FieldElement> = (0..3)
            .map(|j| {
                let mut t = [0u8; 3];
                t[j] = 1;
                solve_trace_system(&ctx, &alphas, &t).unwrap()
            })
            .collect();
        for (i, &a) in alphas.iter().enumerate() {
            for (j, &b) in betas.iter().enumerate() {
                assert_eq!(ctx.trace_abs(ctx.mul(a, b)), u8::from(i == j));
            }
        }
    }

    #[test]
    fn lunelli_sce_is_a_hyperoval_with_the_quoted_betas() {
        let ctx = FieldCtx::new(4).unwrap();
        let arc = lunelli_sce(&ctx).unwrap();
        assert_eq!(arc.len(), 18);
        assert!(arc.is_hyperoval());
        // (zeta^2, zeta, 1) is dual to (zeta, zeta^2, zeta^3) and kills 1
        let zeta = ctx.el(0b10);
        let betas = [ctx.square(zeta), zeta, ctx.one()];
        for (i, &a) in [zeta, ctx.square(zeta), ctx.pow(zeta, 3)].iter().enumerate() {
            for (j, &b) in betas.iter().enumerate() {
                assert_eq!(ctx.trace_abs(ctx.mul(a, b)), u8::from(i == j));
            }
        }
        assert_eq!(ctx.trace_abs(zeta), 0);
        assert_eq!(ctx.trace_abs(ctx.square(zeta)), 0);
        assert_eq!(ctx.trace_abs(ctx.one()), 0);
        assert_eq!(ctx.trace_abs(ctx.pow(zeta, 3)), 1);
    }

    #[test]
    fn lunelli_sce_opolynomial_round_trip() {
        let ctx = FieldCtx::new(4).unwrap();
        let g = OPolynomial::lunelli_sce(&ctx).unwrap();
        let h = g.hyperoval(&ctx).unwrap();
        assert!(h.is_hyperoval());
        // contains the two pivot points of the o-polynomial presentation
        assert!(h.contains(&pt(&ctx, ctx.zero(), ctx.one(), ctx.zero())));
        assert!(h.contains(&pt(&ctx, ctx.zero(), ctx.zero(), ctx.one())));
    }

    #[test]
    fn monomial_opolynomials_and_km_lift() {
        let small = FieldCtx::new(2).unwrap();
        let g = OPolynomial::monomial(&small, 1).unwrap();
        let big = FieldCtx::new(4).unwrap();
        let arc = construct_km(&big, &small, 2, &g).unwrap();
        assert_eq!(arc.t(), 4);
        assert_eq!(arc.len(), 20);
        assert_eq!(arc.nucleus().unwrap().coords(), [big.zero(), big.zero(), big.one()]);
        // gcd guard
        let small4 = FieldCtx::new(4).unwrap();
        assert!(OPolynomial::monomial(&small4, 2).is_err());
        // i = 0 and subfield of order 2 rejected
        assert!(construct_km(&big, &small, 0, &g).is_err());
        let small1 = FieldCtx::new(1).unwrap();
        let g1 = OPolynomial { h_prime: 1, table: vec![big.zero(), big.one()], kind: OPolyKind::Explicit };
        assert!(construct_km(&big, &small1, 3, &g1).is_err());
    }

    #[test]
    fn gw_variants_from_pg2_4() {
        let small = FieldCtx::new(2).unwrap();
        let big = FieldCtx::new(4).unwrap();
        // regular hyperoval through (0,0,1) and (0,1,0)
        let g = OPolynomial::monomial(&small, 1).unwrap();
        let base_a = g.hyperoval(&small).unwrap();
        let lifted = construct_gw(&big, &small, &base_a, GwVariant::A).unwrap();
        assert_eq!(lifted.t(), 4);
        assert_eq!(lifted.len(), 20);

        // move the hyperoval off (0,0,1): send the non-arc point (1,1,0)
        // there so no arc point lands on it
        let shift = crate::symmetry::projectivity_through(
            &small,
            &[
                pt(&small, small.one(), small.one(), small.zero()),
                pt(&small, small.zero(), small.zero(), small.one()),
                pt(&small, small.zero(), small.one(), small.zero()),
                pt(&small, small.one(), small.zero(), small.one()),
            ],
            &[
                pt(&small, small.zero(), small.zero(), small.one()),
                pt(&small, small.one(), small.one(), small.zero()),
                pt(&small, small.zero(), small.one(), small.zero()),
                pt(&small, small.one(), small.zero(), small.one()),
            ],
        )
        .unwrap();
        let base_b = crate::symmetry::apply_collineation(&small, &base_a, &shift).unwrap();
        assert!(!base_b.contains(&pt(&small, small.zero(), small.zero(), small.one())));
        let lifted_b = construct_gw(&big, &small, &base_b, GwVariant::B).unwrap();
        assert_eq!(lifted_b.t(), 8);
        let lifted_c = construct_gw(&big, &small, &base_b, GwVariant::C).unwrap();
        assert_eq!(lifted_c.t(), 8);
        // wrong variant preconditions
        assert!(construct_gw(&big, &small, &base_a, GwVariant::B).is_err());
        assert!(construct_gw(&big, &small, &base_b, GwVariant::A).is_err());
    }

    #[test]
    fn admissible_search_small_degrees() {
        for (h, expect) in [(4u32, 1usize), (5, 0), (6, 1), (7, 2)] {
            let ctx = FieldCtx::new(h).unwrap();
            let found = admissible_search(&ctx);
            assert_eq!(found.len(), expect, "h={h}");
        }
    }

    #[test]
    fn admissible_tuples_at_128_match_the_subfield_orbits() {
        let ctx = FieldCtx::new(7).unwrap();
        let z = ctx.el(0b10);
        let t1 = AdmissibleTuple::new(&ctx, [z, ctx.pow(z, 2), ctx.pow(z, 4), ctx.one()]).unwrap();
        let t2 = AdmissibleTuple::new(
            &ctx,
            [ctx.pow(z, 11), ctx.pow(z, 22), ctx.pow(z, 44), ctx.one()],
        )
        .unwrap();
        let found = admissible_search(&ctx);
        let keys: Vec<Vec<u32>> = found.iter().map(|t| span_class_key(&ctx, &t.span)).collect();
        assert!(keys.contains(&span_class_key(&ctx, &t1.span)));
        assert!(keys.contains(&span_class_key(&ctx, &t2.span)));
        assert_ne!(span_class_key(&ctx, &t1.span), span_class_key(&ctx, &t2.span));
        // no (phi, k) maps one span onto the other
        for phi in 0..7 {
            for k in ctx.elements().skip(1) {
                assert_ne!(t1.span.frobenius(&ctx, phi).scale(&ctx, k), t2.span);
            }
        }
    }

    #[test]
    fn alpha_selection_has_eight_choices_and_fixed_section() {
        let ctx = FieldCtx::new(6).unwrap();
        let found = admissible_search(&ctx);
        assert_eq!(found.len(), 1);
        let tuple = &found[0];
        let alphas = tuple.alphas;
        // count coefficient vectors giving an independent quadruple
        let mut valid = Vec::new();
        for b in 1u32..16 {
            let mut alpha = FieldElement::ZERO;
            for j in 0..4 {
                if b >> (3 - j) & 1 == 1 {
                    alpha += alphas[j];
                }
            }
            let check = [
                ctx.mul(alphas[0], alphas[0] + alphas[3]),
                ctx.mul(alphas[1], alphas[1] + alphas[3]),
                ctx.mul(alphas[2], alphas[2] + alphas[3]),
                ctx.mul(alphas[3], alpha),
            ];
            if independent(ctx.h(), &check) {
                valid.push(alpha);
            }
        }
        assert_eq!(valid.len(), 8);
        // every valid alpha defines the same section on X = 0
        let mus = |alpha: FieldElement| {
            [
                ctx.mul(alphas[0], alphas[0] + alphas[3]),
                ctx.mul(alphas[1], alphas[1] + alphas[3]),
                ctx.mul(alphas[2], alphas[2] + alphas[3]),
                ctx.mul(alphas[3], alpha),
            ]
        };
        let section = |alpha: FieldElement| -> Vec<FieldElement> {
            let m = mus(alpha);
            let x0 = solve_trace_system(&ctx, &m, &[0, 0, 0, 1]).unwrap();
            let mut v: Vec<FieldElement> = trace_dual(&ctx, &span(ctx.h(), &m))
                .enumerate()
                .unwrap()
                .into_iter()
                .map(|w| x0 + w)
                .collect();
            v.sort_unstable();
            v
        };
        let reference = section(valid[0]);
        for &a in &valid[1..] {
            assert_eq!(section(a), reference);
        }
    }

    #[test]
    fn q16_at_64_is_type_4() {
        let ctx = FieldCtx::new(6).unwrap();
        let tuple = admissible_search(&ctx).into_iter().next().unwrap();
        let arc = construct_q16(&ctx, tuple.alphas).unwrap();
        assert_eq!(arc.t(), 4);
        assert_eq!(arc.len(), 68);
        assert_eq!(arc.nucleus().unwrap().coords(), [ctx.zero(), ctx.zero(), ctx.one()]);
        // h <= 5 guarded
        let ctx32 = FieldCtx::new(5).unwrap();
        assert!(construct_q16(&ctx32, [ctx32.el(1), ctx32.el(2), ctx32.el(4), ctx32.el(8)]).is_err());
    }

    #[test]
    fn explicit_graph_arc_census_guard() {
        let ctx = FieldCtx::new(2).unwrap();
        // z -> z^2 is the regular hyperoval's affine graph (y=z^2 graph over z)
        let arc = explicit_affine_arc(&ctx, |z| ctx.square(z), 2).unwrap();
        assert!(arc.is_hyperoval());
        // a non-arc map fails
        assert!(explicit_affine_arc(&ctx, |_| ctx.zero(), 2).is_err());
    }
}
