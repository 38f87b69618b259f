//! The standard regression corpus: one arc per (family, q) combination that
//! the library can build at q in {8, 16, 32, 64, 128}. Shared between the
//! acceptance suite and the report command.

use std::sync::Arc;

use crate::arcs::KMArc;
use crate::constructions::{
    admissible_search, construct_gw, construct_km, construct_q4, construct_q8, construct_q16,
    lunelli_sce, q4_translation_alphas, GwVariant, OPolynomial,
};
use crate::error::Result;
use crate::gf2e::{FieldCtx, FieldElement};
use crate::plane::ProjPoint;
use crate::symmetry::{apply_collineation, projectivity_through};

pub struct CorpusEntry {
    pub label: String,
    pub family: &'static str,
    pub ctx: Arc<FieldCtx>,
    pub arc: KMArc,
    /// the type the family promises at this q
    pub expected_t: u32,
}

impl CorpusEntry {
    pub fn q(&self) -> u32 {
        self.ctx.q()
    }
}

fn pt(ctx: &FieldCtx, x: u32, y: u32, z: u32) -> ProjPoint {
    ProjPoint::new(ctx, [ctx.el(x), ctx.el(y), ctx.el(z)]).unwrap()
}

/// First alpha outside the translation list for the given beta, with
/// alpha*beta != 1 and alpha outside {0,1}.
pub fn non_translation_alpha(ctx: &FieldCtx, beta: FieldElement) -> Result<FieldElement> {
    let bad = q4_translation_alphas(ctx, beta)?;
    Ok(ctx
        .elements()
        .skip(2)
        .find(|&a| !bad.contains(&a) && ctx.mul(a, beta) != ctx.one())
        .expect("q >= 16 leaves room outside the five-element list"))
}

/// A hyperoval of PG(2,q') avoiding (0,0,1), for the B and C lifts: the
/// monomial hyperoval moved by a projectivity that pulls (0,0,1) from the
/// non-arc point (1,1,0).
pub fn shifted_hyperoval(small: &FieldCtx) -> Result<KMArc> {
    let g = OPolynomial::monomial(small, 1)?;
    let base = g.hyperoval(small)?;
    let shift = projectivity_through(
        small,
        &[
            pt(small, 1, 1, 0),
            pt(small, 0, 0, 1),
            pt(small, 0, 1, 0),
            pt(small, 1, 0, 1),
        ],
        &[
            pt(small, 0, 0, 1),
            pt(small, 1, 1, 0),
            pt(small, 0, 1, 0),
            pt(small, 1, 0, 1),
        ],
    )?;
    apply_collineation(small, &base, &shift)
}

/// Build the whole corpus up to the given field degree (7 covers q = 128).
pub fn standard_corpus(max_h: u32) -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    let mut push =
        |label: String, family: &'static str, ctx: &Arc<FieldCtx>, t: u32, arc: KMArc| {
            out.push(CorpusEntry { label, family, ctx: Arc::clone(ctx), arc, expected_t: t });
        };

    if max_h >= 3 {
        let ctx = Arc::new(FieldCtx::new(3)?);
        let (alpha, beta) = (ctx.el(2), ctx.el(4));
        push("q4 @ q=8".into(), "q4", &ctx, 2, construct_q4(&ctx, alpha, beta, 0, 0)?);
    }

    if max_h >= 4 {
        let ctx = Arc::new(FieldCtx::new(4)?);
        let small = FieldCtx::new(2)?;
        let g = OPolynomial::monomial(&small, 1)?;
        push("km i=2 @ q=16".into(), "km", &ctx, 4, construct_km(&ctx, &small, 2, &g)?);
        let base_a = g.hyperoval(&small)?;
        push(
            "gw-a @ q=16".into(),
            "gw-a",
            &ctx,
            4,
            construct_gw(&ctx, &small, &base_a, GwVariant::A)?,
        );
        let base_b = shifted_hyperoval(&small)?;
        push(
            "gw-b @ q=16".into(),
            "gw-b",
            &ctx,
            8,
            construct_gw(&ctx, &small, &base_b, GwVariant::B)?,
        );
        push(
            "gw-c @ q=16".into(),
            "gw-c",
            &ctx,
            8,
            construct_gw(&ctx, &small, &base_b, GwVariant::C)?,
        );
        let beta = ctx.el(2);
        let alpha = ctx.inv(ctx.square(beta))?;
        push(
            "q4 translation @ q=16".into(),
            "q4",
            &ctx,
            4,
            construct_q4(&ctx, alpha, beta, 0, 0)?,
        );
        let alpha = non_translation_alpha(&ctx, beta)?;
        push(
            "q4 generic @ q=16".into(),
            "q4",
            &ctx,
            4,
            construct_q4(&ctx, alpha, beta, 0, 0)?,
        );
        push(
            "q8 @ q=16".into(),
            "q8",
            &ctx,
            2,
            construct_q8(&ctx, [ctx.el(1), ctx.el(2), ctx.el(4)])?,
        );
        push("lunelli-sce @ q=16".into(), "lunelli-sce", &ctx, 2, lunelli_sce(&ctx)?);
    }

    if max_h >= 5 {
        let ctx = Arc::new(FieldCtx::new(5)?);
        let beta = ctx.el(2);
        let alpha = ctx.inv(ctx.square(beta))?;
        push(
            "q4 translation @ q=32".into(),
            "q4",
            &ctx,
            8,
            construct_q4(&ctx, alpha, beta, 0, 0)?,
        );
        let alpha = non_translation_alpha(&ctx, beta)?;
        push(
            "q4 generic @ q=32".into(),
            "q4",
            &ctx,
            8,
            construct_q4(&ctx, alpha, beta, 0, 0)?,
        );
        push(
            "q8 @ q=32".into(),
            "q8",
            &ctx,
            4,
            construct_q8(&ctx, [ctx.el(1), ctx.el(2), ctx.el(4)])?,
        );
    }

    if max_h >= 6 {
        let ctx = Arc::new(FieldCtx::new(6)?);
        let small8 = FieldCtx::new(3)?;
        let g8 = OPolynomial::monomial(&small8, 1)?;
        push("km i=3 @ q=64".into(), "km", &ctx, 8, construct_km(&ctx, &small8, 3, &g8)?);
        let small4 = FieldCtx::new(2)?;
        let g4 = OPolynomial::monomial(&small4, 1)?;
        push("km i=4 @ q=64".into(), "km", &ctx, 16, construct_km(&ctx, &small4, 4, &g4)?);
        let base_a = g8.hyperoval(&small8)?;
        push(
            "gw-a @ q=64".into(),
            "gw-a",
            &ctx,
            8,
            construct_gw(&ctx, &small8, &base_a, GwVariant::A)?,
        );
        let beta = ctx.el(2);
        let alpha = ctx.inv(ctx.square(beta))?;
        push(
            "q4 translation @ q=64".into(),
            "q4",
            &ctx,
            16,
            construct_q4(&ctx, alpha, beta, 0, 0)?,
        );
        push(
            "q8 @ q=64".into(),
            "q8",
            &ctx,
            8,
            construct_q8(&ctx, [ctx.el(1), ctx.el(2), ctx.el(4)])?,
        );
        let tuple = admissible_search(&ctx).into_iter().next().expect("6 | h admits a class");
        push("q16 @ q=64".into(), "q16", &ctx, 4, construct_q16(&ctx, tuple.alphas)?);
    }

    if max_h >= 7 {
        let ctx = Arc::new(FieldCtx::new(7)?);
        let beta = ctx.el(2);
        let alpha = ctx.inv(ctx.square(beta))?;
        push(
            "q4 translation @ q=128".into(),
            "q4",
            &ctx,
            32,
            construct_q4(&ctx, alpha, beta, 0, 0)?,
        );
        push(
            "q8 @ q=128".into(),
            "q8",
            &ctx,
            16,
            construct_q8(&ctx, [ctx.el(1), ctx.el(2), ctx.el(4)])?,
        );
        let z = ctx.el(2);
        push(
            "q16 family 1 @ q=128".into(),
            "q16",
            &ctx,
            8,
            construct_q16(&ctx, [z, ctx.pow(z, 2), ctx.pow(z, 4), ctx.one()])?,
        );
        push(
            "q16 family 2 @ q=128".into(),
            "q16",
            &ctx,
            8,
            construct_q16(&ctx, [ctx.pow(z, 11), ctx.pow(z, 22), ctx.pow(z, 44), ctx.one()])?,
        );
    }

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_types_are_as_advertised() {
        let corpus = standard_corpus(5).unwrap();
        let types: Vec<(u32, u32)> = corpus.iter().map(|e| (e.q(), e.arc.t())).collect();
        assert!(types.contains(&(8, 2)));
        assert!(types.contains(&(16, 4)));
        assert!(types.contains(&(16, 8)));
        assert!(types.contains(&(16, 2)));
        assert!(types.contains(&(32, 8)));
        assert!(types.contains(&(32, 4)));
    }
}
