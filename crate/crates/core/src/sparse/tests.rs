use super::*;
use crate::error::Error;
use crate::grid::{CellBox, DyadicCube, FunctionSequence, Geometry, GridBox, GridFunction};
use crate::maximal::{CellSet, SublinearOperator};
use crate::orlicz::{LogShift, OrliczParams};
use crate::singular::{Amplitude, SphericalKernel, TaOperator};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn line(lower: f64, side: f64, depth: u32) -> Geometry {
    Geometry::new(GridBox::new(1, &[lower], side).unwrap(), depth).unwrap()
}

fn commutator(g: Geometry) -> TaOperator {
    let dim = g.dim();
    TaOperator::new(g, SphericalKernel::preset("const1", dim).unwrap(), Amplitude::xlogx(dim)).unwrap()
}

fn random_sequence(g: Geometry, seed: u64, count: usize) -> FunctionSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let items = (0..count)
        .map(|_| {
            let vals: Vec<f64> = (0..16)
                .map(|b| if (4..12).contains(&b) && rng.gen_bool(0.6) { rng.gen_range(-4.0..4.0) } else { 0.0 })
                .collect();
            GridFunction::piecewise_constant(g, 16, &vals).unwrap()
        })
        .collect();
    FunctionSequence::new(items).unwrap()
}

#[test]
fn sparse_operator_of_fixed_families() {
    let g = line(0.0, 2.0, 4);
    let one = GridFunction::constant(g, 1.0);
    let p0 = OrliczParams::new(0.0).unwrap();
    let s = SparseFamily::undilated(g, &[DyadicCube::standard(1, &[0])]).unwrap();
    let a = sparse_operator(&s, &one, &p0).unwrap();
    assert_eq!(a.values(), GridFunction::from_fn(g, |x| if x[0] < 1.0 { 1.0 } else { 0.0 }).values());

    let s = SparseFamily::undilated(g, &[DyadicCube::standard(1, &[0]), DyadicCube::standard(2, &[0])]).unwrap();
    let expect = |x: f64| {
        if x < 0.5 {
            2.0
        } else if x < 1.0 {
            1.0
        } else {
            0.0
        }
    };
    let a = sparse_operator(&s, &one, &p0).unwrap();
    assert_eq!(a.values(), GridFunction::from_fn(g, |x| expect(x[0])).values());

    // β = 1: every cube contributes the root of t log(1+t) = 1 inverted.
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mid * mid.ln_1p() > 1.0 {
            hi = mid
        } else {
            lo = mid
        }
    }
    let t = 0.5 * (lo + hi);
    let a = sparse_operator(&s, &one, &OrliczParams::new(1.0).unwrap()).unwrap();
    for (i, v) in a.values().iter().enumerate() {
        let want = expect(g.midpoint(i)[0]) / t;
        assert!((v - want).abs() < 1e-8, "{v} vs {want}");
    }
}

#[test]
fn zero_input_gives_an_empty_family() {
    let g = line(-2.0, 4.0, 6);
    let op = commutator(g);
    let fs = FunctionSequence::single(GridFunction::zeros(g));
    let cfg = SparseConfig::new(2.0, 1.0).unwrap();
    let fam = build_sparse_family(&op, &fs, &DyadicCube::standard(0, &[0]), &cfg).unwrap();
    assert!(fam.is_empty());
    let p = OrliczParams::new(1.0).unwrap();
    assert_eq!(sparse_operator(&fam, &fs.lq_norm(2.0), &p).unwrap().max_abs(), 0.0);
    assert_eq!(domination_ratio(&op, &fs, &fam, 2.0, &p).unwrap(), 0.0);
}

#[test]
fn indicator_family_is_sparse_and_dominates() {
    let g = line(-2.0, 4.0, 8);
    let op = commutator(g);
    let f = GridFunction::from_fn(g, |x| if (0.0..0.25).contains(&x[0]) { 1.0 } else { 0.0 });
    let fs = FunctionSequence::single(f);
    let cfg = SparseConfig::new(2.0, 1.0).unwrap();
    let fam = build_sparse_family(&op, &fs, &DyadicCube::standard(0, &[0]), &cfg).unwrap();
    let report = verify_sparsity(&fam, 0.5 / 3.0);
    assert!(report.sparse, "{report:?}");
    assert!(fam.metadata.worst_child_fraction <= 0.5);
    assert!(fam.cubes().iter().all(|c| c.witness_fraction() >= 0.5));
    let ratio = domination_ratio(&op, &fs, &fam, 2.0, &cfg.orlicz).unwrap();
    assert!(ratio.is_finite() && ratio > 0.0 && ratio < 1e4, "{ratio}");
}

#[test]
fn planar_construction_is_sparse() {
    let g = Geometry::new(GridBox::new(2, &[-2.0, -2.0], 4.0).unwrap(), 4).unwrap();
    let op = commutator(g);
    let f = GridFunction::from_fn(g, |x| if x[0].abs() < 0.5 && x[1].abs() < 1.0 { 1.0 + x[0] } else { 0.0 });
    let fs = FunctionSequence::single(f);
    let cfg = SparseConfig::new(2.0, 0.0).unwrap();
    let fam = build_sparse_family(&op, &fs, &DyadicCube::standard(0, &[0, 0]), &cfg).unwrap();
    assert!(!fam.is_empty());
    assert!(verify_sparsity(&fam, 0.5 / 9.0).sparse);
    assert!(fam.metadata.worst_child_fraction <= 0.5);
}

#[test]
fn sparse_averaging_dominates_itself_exactly() {
    let g = line(-2.0, 4.0, 8);
    let op = commutator(g);
    let fs = random_sequence(g, 5, 1);
    let cfg = SparseConfig::new(2.0, 0.0).unwrap();
    let fam = build_sparse_family(&op, &fs, &DyadicCube::standard(0, &[0]), &cfg).unwrap();
    let control = SparseAveraging::new(fam.clone(), cfg.orlicz);
    let r = domination_ratio(&control, &fs, &fam, 2.0, &cfg.orlicz).unwrap();
    assert!((r - 1.0).abs() < 1e-12, "{r}");
    // For sequences the ℓ^q norm of averages is at most the average of ℓ^q norms.
    let fs = random_sequence(g, 6, 3);
    let r = domination_ratio(&control, &fs, &fam, 2.0, &cfg.orlicz).unwrap();
    assert!(r <= 1.0 + 1e-12, "{r}");
}

#[test]
fn log_e_variant_grows_with_beta() {
    let g = line(-2.0, 4.0, 8);
    let op = commutator(g);
    let fs = random_sequence(g, 9, 2);
    let cfg = SparseConfig::new(2.0, 1.0).unwrap();
    let fam = build_sparse_family(&op, &fs, &DyadicCube::standard(0, &[0]), &cfg).unwrap();
    let norm = fs.lq_norm(2.0);
    let lo = sparse_operator(&fam, &norm, &OrliczParams::new(0.0).unwrap()).unwrap();
    let hi = sparse_operator(&fam, &norm, &OrliczParams::new(1.0).unwrap().with_shift(LogShift::E)).unwrap();
    assert!(lo.values().iter().zip(hi.values()).all(|(a, b)| *b >= *a * (1.0 - 1e-9)));
}

/// Returns `huge · Σ|f χ_S|` everywhere: no weak-type bound at all.
struct Broadcast(Geometry);

impl SublinearOperator for Broadcast {
    fn geometry(&self) -> &Geometry {
        &self.0
    }

    fn apply_on(&self, f: &GridFunction, source: &CellSet, targets: &CellBox) -> crate::Result<Vec<f64>> {
        let total: f64 = source.restrict(f).values().iter().map(|v| v.abs()).sum();
        Ok(vec![1e30 * total; targets.cell_count()])
    }
}

#[test]
fn operators_without_weak_type_fail_the_construction() {
    let g = line(-2.0, 4.0, 6);
    let f = GridFunction::from_fn(g, |x| if (0.0..0.25).contains(&x[0]) { 1.0 } else { 0.0 });
    let mut cfg = SparseConfig::new(2.0, 0.0).unwrap();
    cfg.max_doublings = 5;
    let err = build_sparse_family(&Broadcast(g), &FunctionSequence::single(f), &DyadicCube::standard(0, &[0]), &cfg);
    assert!(matches!(err, Err(Error::Construction(_))));
}

#[test]
fn support_outside_the_tripled_root_is_refused() {
    let g = line(-2.0, 4.0, 6);
    let f = GridFunction::from_fn(g, |x| if x[0] < -1.9 { 1.0 } else { 0.0 });
    let cfg = SparseConfig::new(2.0, 0.0).unwrap();
    let r = build_sparse_family(&commutator(g), &FunctionSequence::single(f), &DyadicCube::standard(2, &[2]), &cfg);
    assert!(matches!(r, Err(Error::Parameter(_))));
}

#[test]
fn random_sequences_at_depth_ten() {
    let g = line(-2.0, 4.0, 10);
    let op = commutator(g);
    for c2 in [None, Some(0.25)] {
        let mut cfg = SparseConfig::new(2.0, 1.0).unwrap();
        cfg.c2_initial = c2;
        for seed in 0..3 {
            let fs = random_sequence(g, seed, 1 + seed as usize % 4);
            let fam = build_sparse_family(&op, &fs, &DyadicCube::standard(0, &[0]), &cfg).unwrap();
            assert!(verify_sparsity(&fam, fam.eta()).sparse);
            assert!(fam.metadata.worst_child_fraction <= 0.5);
            let r = domination_ratio(&op, &fs, &fam, 2.0, &cfg.orlicz).unwrap();
            assert!(r.is_finite() && r < 1e4, "seed {seed}: {r}");
        }
    }
}
