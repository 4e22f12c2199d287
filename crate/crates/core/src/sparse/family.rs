use std::fmt::Write as _;

use crate::error::{param, Result};
use crate::grid::{CellBox, DyadicCube, Geometry};

/// One member `3Q` of a sparse family, with the witness `E_Q ⊆ Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseCube {
    /// The recorded cube `Q` before dilation.
    pub cube: DyadicCube,
    /// The cells of `Q`.
    pub cells: CellBox,
    /// `3Q` clipped to the box; this is the family member.
    pub dilated: CellBox,
    /// Sorted cell indices of `E_Q`.
    pub witness: Vec<usize>,
}

impl SparseCube {
    /// `|E_Q| / |Q|`.
    pub fn witness_fraction(&self) -> f64 {
        self.witness.len() as f64 / self.cells.cell_count() as f64
    }
}

/// How a family was produced.
#[derive(Clone, Debug, Default, PartialEq, serde::Serialize)]
pub struct BuildMetadata {
    /// Number of cubes whose children were examined.
    pub nodes: usize,
    /// Deepest recursion level reached (the root is 0).
    pub recursion_depth: usize,
    /// Initial threshold multiplier.
    pub c2_initial: f64,
    /// Largest threshold multiplier any node needed.
    pub c2_max: f64,
    /// Largest `Σ|P_j| / |Q|` over all nodes.
    pub worst_child_fraction: f64,
    /// Finest level of the grand maximal operator used in the selection.
    pub grand_maximal_depth: u32,
}

/// A family of cubes with pairwise disjoint witness sets.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseFamily {
    geom: Geometry,
    cubes: Vec<SparseCube>,
    eta: f64,
    pub metadata: BuildMetadata,
}

impl SparseFamily {
    pub fn new(geom: Geometry, mut cubes: Vec<SparseCube>, eta: f64) -> Self {
        cubes.sort_by_key(|c| c.cube.sort_key());
        Self { geom, cubes, eta, metadata: BuildMetadata::default() }
    }

    /// Family whose witnesses are the whole cubes, `E_Q = Q`; the members
    /// are the cubes themselves, not their dilations.
    pub fn undilated(geom: Geometry, cubes: &[DyadicCube]) -> Result<Self> {
        let fam = geom.family();
        let members = cubes
            .iter()
            .map(|c| {
                let cells = fam.cells(c)?;
                Ok(SparseCube { cube: *c, cells, dilated: cells, witness: cells.indices(&geom) })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(geom, members, 1.0))
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geom
    }

    pub fn cubes(&self) -> &[SparseCube] {
        &self.cubes
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    /// The sparsity parameter the family was built for.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// One line per cube: `grid,level,index0,index1,witness_fraction`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("grid,level,index0,index1,witness_fraction\n");
        for c in &self.cubes {
            let _ = writeln!(
                out,
                "{},{},{},{},{:?}",
                c.cube.grid,
                c.cube.level,
                c.cube.index[0],
                c.cube.index[1],
                c.witness_fraction()
            );
        }
        out
    }
}

/// Outcome of [`verify_sparsity`].
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct SparsityReport {
    pub sparse: bool,
    /// `min |E_Q| / |3Q|` over the family (1 for an empty family).
    pub worst_ratio: f64,
    pub witnesses_inside: bool,
    pub witnesses_disjoint: bool,
}

/// Checks `E_Q ⊆ Q ⊆ 3Q`, `|E_Q| >= η|3Q|` and pairwise disjointness of
/// the stored witnesses, exactly on cell sets.
pub fn verify_sparsity(family: &SparseFamily, eta: f64) -> SparsityReport {
    let geom = family.geometry();
    let mut owner = vec![false; geom.cell_count()];
    let mut inside = true;
    let mut disjoint = true;
    let mut worst = 1.0f64;
    for c in family.cubes() {
        inside &= c.dilated.contains_box(&c.cells);
        for &i in &c.witness {
            inside &= i < owner.len() && c.cells.contains_coords(geom.cell_coords(i));
            if i < owner.len() {
                disjoint &= !owner[i];
                owner[i] = true;
            }
        }
        worst = worst.min(c.witness.len() as f64 / c.dilated.cell_count() as f64);
    }
    SparsityReport {
        sparse: inside && disjoint && worst >= eta,
        worst_ratio: worst,
        witnesses_inside: inside,
        witnesses_disjoint: disjoint,
    }
}

/// Greedy witness assignment: every box, smallest first, claims
/// `⌈η|Q|⌉` of its still unclaimed cells in index order.
fn greedy_feasible(geom: &Geometry, boxes: &[CellBox], order: &[usize], eta: f64) -> bool {
    let mut taken = vec![false; geom.cell_count()];
    for &b in order {
        let need = (eta * boxes[b].cell_count() as f64 - 1e-9).ceil() as usize;
        let mut got = 0;
        boxes[b].for_each_index(geom, |i| {
            if got < need && !taken[i] {
                taken[i] = true;
                got += 1;
            }
        });
        if got < need {
            return false;
        }
    }
    true
}

/// Largest `η` for which the greedy assignment finds disjoint witnesses
/// `E_Q ⊆ Q` with `|E_Q| >= η|Q|`.
///
/// Exact for nested-or-disjoint collections; a lower bound otherwise.
pub fn greedy_sparsity(geom: &Geometry, boxes: &[CellBox]) -> Result<f64> {
    if boxes.iter().any(|b| b.is_empty() || b.hi(0) > geom.cells_per_axis()) {
        return param("boxes must be non-empty and inside the grid");
    }
    if boxes.is_empty() {
        return Ok(1.0);
    }
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by_key(|&b| (boxes[b].cell_count(), b));
    // The optimum is m/|Q| for some member Q and count m.
    let mut candidates: Vec<f64> = boxes
        .iter()
        .flat_map(|b| {
            let n = b.cell_count();
            (1..=n).map(move |m| m as f64 / n as f64)
        })
        .collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let (mut lo, mut hi) = (0usize, candidates.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if greedy_feasible(geom, boxes, &order, candidates[mid]) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    Ok(if lo == 0 { 0.0 } else { candidates[lo - 1] })
}
