use rayon::prelude::*;

use super::family::{BuildMetadata, SparseCube, SparseFamily};
use crate::error::{param, Error, Result};
use crate::grid::{cz_decompose, lq_combine, CellBox, DyadicCube, FunctionSequence, GridFunction};
use crate::maximal::{grand_maximal_on, CellSet, GrandMaximalConfig, SublinearOperator};
use crate::orlicz::{luxemburg_norm_on, OrliczParams};

/// Parameters of [`build_sparse_family`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SparseConfig {
    pub q: f64,
    pub orlicz: OrliczParams,
    /// Starting threshold multiplier; `None` means `2^{n+4}`.
    pub c2_initial: Option<f64>,
    /// Number of doublings allowed before the construction gives up.
    pub max_doublings: u32,
    /// Finest level of the cubes in the grand maximal operator; `None`
    /// means the grid depth.
    pub grand_maximal_depth: Option<u32>,
    pub budget: f64,
}

impl SparseConfig {
    pub fn new(q: f64, beta: f64) -> Result<Self> {
        if !(q >= 1.0) {
            return param(format!("q must be at least 1, got {q}"));
        }
        Ok(Self {
            q,
            orlicz: OrliczParams::new(beta)?,
            c2_initial: None,
            max_doublings: 40,
            grand_maximal_depth: None,
            budget: 5e10,
        })
    }
}

struct Node {
    cube: SparseCube,
    c2: f64,
    child_fraction: f64,
    depth: usize,
}

struct Context<'a, T: SublinearOperator + ?Sized> {
    op: &'a T,
    fs: &'a FunctionSequence,
    norm: GridFunction,
    config: SparseConfig,
    grand: GrandMaximalConfig,
    c2_initial: f64,
}

/// The stopping-time construction of a sparse family dominating `T` on
/// functions supported in `3Q_0`.
///
/// At each cube `Q` (starting from `Q_0`): `Λ` is the Luxemburg norm of
/// `‖{f_k}‖_{ℓ^q}` over `3Q`; `E` collects the cells of `Q` where
/// `‖{f_k}‖_{ℓ^q}` or `‖{M_T(f_k χ_{3Q})}‖_{ℓ^q}` exceed `C_2 Λ`, with `C_2`
/// doubled until `|E| <= 2^{-n-2}|Q|`; the Calderón–Zygmund cubes of `χ_E`
/// at level `2^{-n-1}` are the children and `Q` keeps the witness
/// `Q \ ∪ P_j`. Cubes with `Λ = 0` are dropped and single cells end the
/// recursion. The members of the family are the clipped dilations `3Q`.
pub fn build_sparse_family<T: SublinearOperator + ?Sized>(
    op: &T,
    fs: &FunctionSequence,
    q0: &DyadicCube,
    config: &SparseConfig,
) -> Result<SparseFamily> {
    let geom = *fs.geometry();
    if op.geometry() != &geom {
        return param("operator and functions live on different geometries");
    }
    let n = geom.dim() as i32;
    let gm_depth = config.grand_maximal_depth.unwrap_or(geom.depth());
    if gm_depth > geom.depth() {
        return param(format!("grand maximal depth {gm_depth} exceeds the grid depth {}", geom.depth()));
    }
    let q0_cells = geom.family().cells(q0)?;
    let triple = q0_cells.triple_clipped(geom.cells_per_axis());
    for f in fs.items() {
        if f.values().iter().enumerate().any(|(i, v)| *v != 0.0 && !triple.contains_coords(geom.cell_coords(i))) {
            return param("functions must vanish outside 3Q0");
        }
    }
    let ctx = Context {
        op,
        fs,
        norm: fs.lq_norm(config.q),
        config: *config,
        grand: GrandMaximalConfig { depth: gm_depth, budget: config.budget },
        c2_initial: config.c2_initial.unwrap_or(2f64.powi(n + 4)),
    };
    let nodes = visit(&ctx, *q0, q0_cells, 0)?;
    let mut meta = BuildMetadata {
        nodes: nodes.len(),
        c2_initial: ctx.c2_initial,
        grand_maximal_depth: gm_depth,
        ..Default::default()
    };
    for node in &nodes {
        meta.recursion_depth = meta.recursion_depth.max(node.depth);
        meta.c2_max = meta.c2_max.max(node.c2);
        meta.worst_child_fraction = meta.worst_child_fraction.max(node.child_fraction);
    }
    let eta = 0.5 * 3f64.powi(-n);
    let mut family = SparseFamily::new(geom, nodes.into_iter().map(|node| node.cube).collect(), eta);
    family.metadata = meta;
    Ok(family)
}

fn visit<T: SublinearOperator + ?Sized>(
    ctx: &Context<'_, T>,
    cube: DyadicCube,
    cells: CellBox,
    depth: usize,
) -> Result<Vec<Node>> {
    let geom = *ctx.fs.geometry();
    let n = geom.dim() as i32;
    let triple = cells.triple_clipped(geom.cells_per_axis());
    let lambda = luxemburg_norm_on(&ctx.norm, &triple, &ctx.config.orlicz)?;
    if lambda == 0.0 {
        return Ok(Vec::new());
    }
    let own = cells.indices(&geom);
    if cells.cell_count() == 1 {
        let cube = SparseCube { cube, cells, dilated: triple, witness: own };
        return Ok(vec![Node { cube, c2: ctx.c2_initial, child_fraction: 0.0, depth }]);
    }

    let local = CellSet::Inside(triple);
    let maximal: Vec<GridFunction> = ctx
        .fs
        .items()
        .iter()
        .map(|f| grand_maximal_on(ctx.op, &local.restrict(f), &cells, &ctx.grand))
        .collect::<Result<_>>()?;
    let maximal_norm = lq_combine(&geom, maximal.iter().map(|g| g.values()), ctx.config.q);

    let allowed = cells.cell_count() as f64 * 2f64.powi(-(n + 2));
    let mut c2 = ctx.c2_initial;
    let mut exceptional = Vec::new();
    for attempt in 0..=ctx.config.max_doublings {
        let level = c2 * lambda;
        exceptional =
            own.iter().copied().filter(|&i| ctx.norm.values()[i] > level || maximal_norm.values()[i] > level).collect();
        if exceptional.len() as f64 <= allowed {
            break;
        }
        if attempt == ctx.config.max_doublings {
            return Err(Error::Construction(format!(
                "exceptional set still covers {} of {} cells of {cube:?} at C2 = {c2:.3e}",
                exceptional.len(),
                cells.cell_count()
            )));
        }
        c2 *= 2.0;
    }

    let mut indicator = GridFunction::zeros(geom);
    for &i in &exceptional {
        indicator.values_mut()[i] = 1.0;
    }
    let children = cz_decompose(&indicator, &cube, 2f64.powi(-(n + 1)))?;
    let fam = geom.family();
    let child_cells: Vec<CellBox> = children.iter().map(|c| fam.cells(c)).collect::<Result<_>>()?;
    let mut covered = vec![false; geom.cell_count()];
    for b in &child_cells {
        b.for_each_index(&geom, |i| covered[i] = true);
    }
    let child_measure: usize = child_cells.iter().map(|b| b.cell_count()).sum();
    let child_fraction = child_measure as f64 / cells.cell_count() as f64;
    if child_fraction > 0.5 {
        return Err(Error::Construction(format!("children of {cube:?} cover {child_fraction:.3} of it")));
    }
    let witness: Vec<usize> = own.into_iter().filter(|&i| !covered[i]).collect();

    let below: Vec<Vec<Node>> = children
        .par_iter()
        .zip(child_cells.par_iter())
        .map(|(c, b)| visit(ctx, *c, *b, depth + 1))
        .collect::<Result<_>>()?;
    let mut out = vec![Node { cube: SparseCube { cube, cells, dilated: triple, witness }, c2, child_fraction, depth }];
    out.extend(below.into_iter().flatten());
    Ok(out)
}
