//! Acceptance suite: one test per shipped guarantee, each printing a single
//! PASS line with the measured values (run with --nocapture to see them).
//! Every tolerance here is exact.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kmarc_core::arcs::{
    f2linear_section_check, linear_pencil_check, secant_section_values, vandermonde_check,
    verify_km,
};
use kmarc_core::constructions::{
    admissible_search, construct_q4, construct_q8, construct_q16, lunelli_sce,
    q4_translation_alphas,
};
use kmarc_core::corpus::standard_corpus;
use kmarc_core::f2linalg::{
    enumerate_subgroups, independent, is_coset, span, trace_dual, Subgroup,
};
use kmarc_core::plane::{incident, ProjLine, ProjPoint};
use kmarc_core::symmetry::{
    equivalent, is_elation_arc, is_translation_arc, stabilizer, Collineation,
};
use kmarc_core::{FieldCtx, FieldElement};

const SEED: u64 = 0x6b6d_6172_6373;

fn origin(ctx: &FieldCtx) -> ProjPoint {
    ProjPoint::new(ctx, [ctx.zero(), ctx.zero(), ctx.one()]).unwrap()
}

/// 1. Census correctness over the whole corpus at q in {8,...,128}.
#[test]
fn criterion_01_census_correctness() {
    let started = Instant::now();
    let corpus = standard_corpus(7).expect("corpus builds");
    assert!(corpus.iter().any(|e| e.q() == 8));
    assert!(corpus.iter().any(|e| e.q() == 128));
    for entry in &corpus {
        let ctx = &*entry.ctx;
        let rep = verify_km(ctx, entry.arc.points());
        assert!(rep.is_km, "{}: {:?}", entry.label, rep.failure);
        let t = rep.t.unwrap();
        assert_eq!(t, entry.expected_t, "{}", entry.label);
        assert_eq!(entry.arc.len() as u64, ctx.q() as u64 + t as u64, "{}", entry.label);
        let sizes: Vec<u32> = rep.histogram.keys().copied().collect();
        assert!(
            sizes.iter().all(|&m| m == 0 || m == 2 || m == t),
            "{}: sizes {sizes:?}",
            entry.label
        );
        if t > 2 {
            assert_eq!(rep.secant_count, ctx.q() / t + 1, "{}", entry.label);
            assert_eq!(rep.nucleus.unwrap(), origin(ctx), "{}", entry.label);
        } else {
            assert!(rep.nucleus.is_none(), "{}", entry.label);
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 10, "census pass took {elapsed:?}");
    println!(
        "ACCEPTANCE 1 PASS: census clean on {} corpus arcs in {elapsed:?}",
        corpus.len()
    );
}

/// 2. The q/8 construction at q = 16 is the Lunelli-Sce hyperoval
///    (stabilizer order 144, equivalence witness found).
#[test]
fn criterion_02_lunelli_sce_identity() {
    let started = Instant::now();
    let ctx = FieldCtx::new(4).unwrap();
    let ls = lunelli_sce(&ctx).unwrap();
    let q8 = construct_q8(&ctx, [ctx.el(1), ctx.el(2), ctx.el(4)]).unwrap();
    let witness = equivalent(&ctx, &q8, &ls, u64::MAX).unwrap().expect("equivalence witness");
    for p in q8.points() {
        assert!(ls.contains(&witness.apply_point(&ctx, p)));
    }
    let rep_ls = stabilizer(&ctx, &ls, u64::MAX).unwrap();
    assert_eq!(rep_ls.order, 144);
    let rep_q8 = stabilizer(&ctx, &q8, u64::MAX).unwrap();
    assert_eq!(rep_q8.order, 144);
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 30);
    println!("ACCEPTANCE 2 PASS: q8@16 = Lunelli-Sce, stabilizer order 144 in {elapsed:?}");
}

/// 3. PG(2,32): all 155 rank-3 subgroups give one type-4 arc up to
///    equivalence; stabilizer order exactly 16.
#[test]
fn criterion_03_pg2_32_uniqueness() {
    let started = Instant::now();
    let ctx = FieldCtx::new(5).unwrap();
    let subgroups = enumerate_subgroups(5, 3);
    assert_eq!(subgroups.len(), 155);
    let arcs: Vec<_> = subgroups
        .iter()
        .map(|s| {
            let b = s.basis();
            construct_q8(&ctx, [b[0], b[1], b[2]]).expect("every rank-3 triple works")
        })
        .collect();
    for arc in &arcs {
        assert_eq!(arc.t(), 4);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut pairs = 0;
    while pairs < 20 {
        let i = rng.gen_range(0..arcs.len());
        let j = rng.gen_range(0..arcs.len());
        if i == j {
            continue;
        }
        let w = equivalent(&ctx, &arcs[i], &arcs[j], u64::MAX)
            .unwrap()
            .unwrap_or_else(|| panic!("arcs {i} and {j} must be equivalent"));
        assert!(arcs[i]
            .points()
            .iter()
            .all(|p| arcs[j].contains(&w.apply_point(&ctx, p))));
        pairs += 1;
    }
    let rep = stabilizer(&ctx, &arcs[0], u64::MAX).unwrap();
    assert_eq!(rep.order, 16);
    let elapsed = started.elapsed();
    println!(
        "ACCEPTANCE 3 PASS: 155 subgroups, 20 pairwise witnesses, stabilizer 16 in {elapsed:?}"
    );
}

/// 4. The q = 64 q/16 arc: stabilizer 192, projectivities 32, elations 8,
///    orbit sizes {4,32,32}.
#[test]
fn criterion_04_q64_q16_stabilizer() {
    let started = Instant::now();
    let ctx = FieldCtx::new(6).unwrap();
    let tuple = admissible_search(&ctx).into_iter().next().expect("one class at h=6");
    let arc = construct_q16(&ctx, tuple.alphas).unwrap();
    let rep = stabilizer(&ctx, &arc, u64::MAX).unwrap();
    assert_eq!(rep.order, 192);
    assert_eq!(rep.projectivity_order, 32);
    assert_eq!(rep.elation_order, 8);
    let mut sizes: Vec<usize> = rep.orbits.iter().map(|o| o.len()).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![4, 32, 32]);
    let elapsed = started.elapsed();
    println!("ACCEPTANCE 4 PASS: q16@64 stabilizer 192/32/8, orbits 4+32+32 in {elapsed:?}");
}

/// 5. q = 128: two admissible classes; stabilizers 896 with projectivity
///    subgroup 128 and one affine orbit; inequivalent by the exhaustive
///    (phi,k) subgroup scan and by frame-search absence.
#[test]
fn criterion_05_q128_two_families() {
    let started = Instant::now();
    let ctx = FieldCtx::new(7).unwrap();
    let classes = admissible_search(&ctx);
    assert_eq!(classes.len(), 2);
    let z = ctx.el(2);
    let t1 = [z, ctx.pow(z, 2), ctx.pow(z, 4), ctx.one()];
    let t2 = [ctx.pow(z, 11), ctx.pow(z, 22), ctx.pow(z, 44), ctx.one()];
    let arc1 = construct_q16(&ctx, t1).unwrap();
    let arc2 = construct_q16(&ctx, t2).unwrap();
    for arc in [&arc1, &arc2] {
        let rep = stabilizer(&ctx, arc, u64::MAX).unwrap();
        assert_eq!(rep.order, 896);
        assert_eq!(rep.projectivity_order, 128);
        // single orbit on the 128 affine points
        let x0 = ProjLine::new(&ctx, [ctx.one(), ctx.zero(), ctx.zero()]).unwrap();
        let affine_orbits: Vec<usize> = rep
            .orbits
            .iter()
            .filter(|o| o.iter().any(|p| !incident(&ctx, p, &x0)))
            .map(|o| o.len())
            .collect();
        assert_eq!(affine_orbits, vec![128]);
    }
    // subgroup scan over Aut(F128) x F128*
    let s1 = span(7, &t1);
    let s2 = span(7, &t2);
    for phi in 0..7 {
        for k in ctx.elements().skip(1) {
            assert_ne!(s1.frobenius(&ctx, phi).scale(&ctx, k), s2);
        }
    }
    // frame-search absence is a proof of inequivalence
    let w = equivalent(&ctx, &arc1, &arc2, u64::MAX).unwrap();
    assert!(w.is_none());
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 1800);
    println!(
        "ACCEPTANCE 5 PASS: two q16@128 classes, stabilizers 896/128, inequivalent in {elapsed:?}"
    );
}

/// 6. Exhaustive (alpha,beta) sweep at q = 16 and q = 32: translation holds
///    exactly on the five-element alpha list, and exactly when the
///    t-secants form an F2-linear pencil.
#[test]
fn criterion_06_q4_translation_sweep() {
    let started = Instant::now();
    let mut checked = 0u32;
    for h in [4u32, 5] {
        let ctx = FieldCtx::new(h).unwrap();
        for beta in ctx.elements().skip(2) {
            let translation_alphas = q4_translation_alphas(&ctx, beta).unwrap();
            for alpha in ctx.elements().skip(2) {
                if ctx.mul(alpha, beta) == ctx.one() {
                    continue;
                }
                let arc = construct_q4(&ctx, alpha, beta, 0, 0).unwrap();
                let is_translation = arc
                    .t_secants()
                    .iter()
                    .any(|l| is_translation_arc(&ctx, &arc, l).unwrap());
                let expected = translation_alphas.contains(&alpha);
                assert_eq!(
                    is_translation, expected,
                    "q={} alpha={alpha} beta={beta}",
                    ctx.q()
                );
                let pencil = linear_pencil_check(&ctx, &arc).unwrap();
                assert_eq!(
                    pencil.linear, expected,
                    "pencil mismatch at q={} alpha={alpha} beta={beta}",
                    ctx.q()
                );
                checked += 1;
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 300);
    println!("ACCEPTANCE 6 PASS: {checked} (alpha,beta) pairs swept in {elapsed:?}");
}

/// 7. Elation/translation classification across the corpus: the relative
///    trace and direct-complement-A lifts are elation arcs; the q/8 and
///    q/16 arcs are elation but never translation; reported elation lines
///    are t-secants.
#[test]
fn criterion_07_elation_translation_classification() {
    let started = Instant::now();
    let corpus = standard_corpus(7).unwrap();
    for entry in &corpus {
        let ctx = &*entry.ctx;
        let arc = &entry.arc;
        let report = is_elation_arc(ctx, arc).unwrap();
        // every reported elation line meets the arc in exactly t points
        for (line, s) in &report.elation_lines {
            let hits = arc.points().iter().filter(|p| incident(ctx, p, line)).count();
            assert_eq!(hits, arc.t() as usize, "{}", entry.label);
            assert_eq!(s.size(), arc.t() as u64, "{}", entry.label);
        }
        match entry.family {
            "km" | "gw-a" => {
                assert!(report.is_elation_arc, "{} must be an elation arc", entry.label);
            }
            "q8" | "q16" => {
                assert!(report.is_elation_arc, "{} must be an elation arc", entry.label);
                if arc.t() > 2 {
                    for (line, is_tr) in &report.translation_lines {
                        assert!(
                            !is_tr,
                            "{}: translation line {:?} should not exist",
                            entry.label, line
                        );
                    }
                } else {
                    // hyperoval case: no 2-secant is a translation line
                    let pts = arc.points();
                    let mut seen = BTreeSet::new();
                    for (i, p) in pts.iter().enumerate() {
                        for r in pts.iter().skip(i + 1) {
                            let l = kmarc_core::plane::line_through(ctx, p, r).unwrap();
                            if seen.insert(l.index(ctx)) {
                                assert!(
                                    !is_translation_arc(ctx, arc, &l).unwrap(),
                                    "{}",
                                    entry.label
                                );
                            }
                        }
                    }
                }
            }
            _ => {}
        }
    }
    let elapsed = started.elapsed();
    println!(
        "ACCEPTANCE 7 PASS: elation/translation classification on {} arcs in {elapsed:?}",
        corpus.len()
    );
}

/// 8. Vandermonde sections everywhere; the explicit GF(2^6) eight-element
///    set is Vandermonde but not F2-linear.
#[test]
fn criterion_08_vandermonde_suite() {
    let started = Instant::now();
    let corpus = standard_corpus(7).unwrap();
    let mut sections = 0u32;
    for entry in &corpus {
        let ctx = &*entry.ctx;
        for (line, _) in entry.arc.sections() {
            let values = secant_section_values(ctx, &entry.arc, line).unwrap();
            assert!(
                vandermonde_check(ctx, &values, entry.arc.t()),
                "{}: section on {line:?}",
                entry.label
            );
            sections += 1;
        }
    }
    let ctx = FieldCtx::new(6).unwrap();
    let z = ctx.el(0b10);
    let mut eight = vec![ctx.zero()];
    for e in [12u64, 15, 17, 19, 43, 56, 59] {
        eight.push(ctx.pow(z, e));
    }
    assert!(vandermonde_check(&ctx, &eight, 8));
    let mut on_line: Vec<ProjPoint> = eight
        .iter()
        .map(|&y| ProjPoint::new(&ctx, [ctx.zero(), ctx.one(), y]).unwrap())
        .collect();
    on_line.push(origin(&ctx));
    assert!(!f2linear_section_check(&ctx, &on_line).unwrap().linear);
    let raw: Vec<ProjPoint> = on_line[..8].to_vec();
    assert!(!f2linear_section_check(&ctx, &raw).unwrap().linear);
    let elapsed = started.elapsed();
    println!("ACCEPTANCE 8 PASS: {sections} Vandermonde sections, GF(64) witness in {elapsed:?}");
}

/// 9. Admissible-tuple classification: empty at h = 5, the exact classes at
///    h in {4,6,7}.
#[test]
fn criterion_09_admissibility_classification() {
    let started = Instant::now();
    assert!(admissible_search(&FieldCtx::new(5).unwrap()).is_empty());

    let ctx = FieldCtx::new(4).unwrap();
    let found = admissible_search(&ctx);
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].span, Subgroup::full(4)); // F16 itself

    let ctx = FieldCtx::new(6).unwrap();
    let found = admissible_search(&ctx);
    assert_eq!(found.len(), 1);
    let f4 = span(6, &ctx.subfield(2).unwrap());
    let f8 = span(6, &ctx.subfield(3).unwrap());
    assert_eq!(found[0].span, f4.join(&f8));

    let ctx = FieldCtx::new(7).unwrap();
    let found = admissible_search(&ctx);
    assert_eq!(found.len(), 2);
    let z = ctx.el(2);
    let s1 = span(7, &[z, ctx.pow(z, 2), ctx.pow(z, 4), ctx.one()]);
    let s2 = span(7, &[ctx.pow(z, 11), ctx.pow(z, 22), ctx.pow(z, 44), ctx.one()]);
    let spans: Vec<&Subgroup> = found.iter().map(|t| &t.span).collect();
    // representatives are canonical forms of the two classes
    let classes: Vec<bool> = spans
        .iter()
        .map(|s| {
            (0..7).any(|phi| {
                ctx.elements()
                    .skip(1)
                    .any(|k| s.frobenius(&ctx, phi).scale(&ctx, k) == s1)
            })
        })
        .collect();
    assert!(classes.contains(&true));
    let classes2: Vec<bool> = spans
        .iter()
        .map(|s| {
            (0..7).any(|phi| {
                ctx.elements()
                    .skip(1)
                    .any(|k| s.frobenius(&ctx, phi).scale(&ctx, k) == s2)
            })
        })
        .collect();
    assert!(classes2.contains(&true));
    let elapsed = started.elapsed();
    println!("ACCEPTANCE 9 PASS: admissible classes 1/0/1/2 at h=4,5,6,7 in {elapsed:?}");
}

/// 10. Oracle suite: field axioms, trace linearity, duality involution,
///     canonical spans, coset tests against enumeration, and collineation
///     group laws; exhaustive for h <= 6, seeded-random (>= 10^4 cases)
///     for h in {7,8}.
#[test]
fn criterion_10_oracle_suite() {
    let started = Instant::now();
    // exhaustive field laws for h <= 6
    for h in 1..=6u32 {
        let ctx = FieldCtx::new(h).unwrap();
        for a in ctx.elements() {
            for b in ctx.elements() {
                assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
                assert_eq!(
                    ctx.trace_abs(a + b),
                    ctx.trace_abs(a) ^ ctx.trace_abs(b)
                );
            }
        }
        if h <= 4 {
            for a in ctx.elements() {
                for b in ctx.elements() {
                    for c in ctx.elements() {
                        assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
                        assert_eq!(ctx.mul(a, b + c), ctx.mul(a, b) + ctx.mul(a, c));
                    }
                }
            }
        }
        for x in ctx.elements() {
            assert_eq!(ctx.trace_abs(ctx.square(x)), ctx.trace_abs(x));
        }
        // duality involution over every subgroup
        for rank in 0..=h as usize {
            for s in enumerate_subgroups(h, rank) {
                let d = trace_dual(&ctx, &s);
                assert_eq!(s.rank() + d.rank(), h as usize);
                assert_eq!(trace_dual(&ctx, &d), s);
            }
        }
    }

    // randomized oracle pass, fixed seed, >= 10^4 cases per degree
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xa5a5);
    let mut cases = 0u64;
    for h in [7u32, 8] {
        let ctx = FieldCtx::new(h).unwrap();
        let mask = ctx.q() - 1;
        for _ in 0..10_000 {
            cases += 1;
            let a = ctx.el(rng.gen::<u32>() & mask);
            let b = ctx.el(rng.gen::<u32>() & mask);
            let c = ctx.el(rng.gen::<u32>() & mask);
            assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
            assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
            assert_eq!(ctx.mul(a, b + c), ctx.mul(a, b) + ctx.mul(a, c));
            assert_eq!(ctx.trace_abs(a + b), ctx.trace_abs(a) ^ ctx.trace_abs(b));
            if !a.is_zero() {
                assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), ctx.one());
            }

            // spans: permutation invariance and coset vs enumeration
            let gens: Vec<FieldElement> =
                (0..3).map(|_| ctx.el(rng.gen::<u32>() & mask)).collect();
            let mut shuffled = gens.clone();
            shuffled.shuffle(&mut rng);
            let s = span(h, &gens);
            assert_eq!(s, span(h, &shuffled));
            let members = s.enumerate().unwrap();
            let shift = ctx.el(rng.gen::<u32>() & mask);
            let coset: Vec<FieldElement> = members.iter().map(|&m| m + shift).collect();
            assert!(is_coset(&coset, &s));
            assert_eq!(
                independent(h, &gens),
                s.rank() == gens.len()
            );

            // collineation group laws on random invertible matrices
            let random_col = |rng: &mut ChaCha8Rng| loop {
                let m = [[ctx.el(rng.gen::<u32>() & mask); 3]; 3].map(|row| {
                    let _ = row;
                    [
                        ctx.el(rng.gen::<u32>() & mask),
                        ctx.el(rng.gen::<u32>() & mask),
                        ctx.el(rng.gen::<u32>() & mask),
                    ]
                });
                if let Ok(g) = Collineation::new(&ctx, m, rng.gen_range(0..h)) {
                    return g;
                }
            };
            let g1 = random_col(&mut rng);
            let g2 = random_col(&mut rng);
            assert!(g1.compose(&ctx, &g1.inverse(&ctx)).is_identity(&ctx));
            let p = ProjPoint::new(
                &ctx,
                [ctx.one(), ctx.el(rng.gen::<u32>() & mask), ctx.el(rng.gen::<u32>() & mask)],
            )
            .unwrap();
            assert_eq!(
                g1.compose(&ctx, &g2).apply_point(&ctx, &p),
                g1.apply_point(&ctx, &g2.apply_point(&ctx, &p))
            );
        }
    }
    assert!(cases >= 10_000);
    let elapsed = started.elapsed();
    println!("ACCEPTANCE 10 PASS: oracle suite, {cases} randomized cases in {elapsed:?}");
}
