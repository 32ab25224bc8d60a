//! Per-strip merge trees: as the radius r grows, the components of the
//! pre-image of the circle |f| = r around individual zeros expand and touch
//! pairwise at branch points (zeros of f'). The fusion structure is computed
//! as the persistence merge tree of |f| restricted to the strip on the
//! evaluation grid; each grid-level merge event is then refined to a
//! certified zero of f' by Newton iteration, and the merge radius is the
//! modulus of f there.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{AnalyticMap, Shifted};
use crate::config::Tolerances;
use crate::error::ZeroError;
use crate::grid::FieldGrid;
use crate::zeros::locate::newton_refine;
use crate::zeros::ZeroRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MergeChild {
    /// Index into the tree's `leaves`.
    Leaf(usize),
    /// Index into the tree's `nodes`.
    Node(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeNode {
    pub branch_point: Complex64,
    pub merge_radius: f64,
    pub children: [MergeChild; 2],
}

/// Leaves are zeros of f (a double zero appears as two leaves fused at
/// radius zero); internal nodes are branch points with their merge radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeTree {
    pub strip: i64,
    /// Zero locations at the leaves, in input order (multiplicity expanded).
    pub leaves: Vec<Complex64>,
    pub nodes: Vec<MergeNode>,
    pub root_radius: f64,
    /// True when the strip was window-restricted (k = 0 or truncated).
    pub partial: bool,
}

impl MergeTree {
    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn internal_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_full_binary(&self) -> bool {
        self.leaves.len() == self.nodes.len() + 1
    }

    /// Merge radii must strictly increase from leaves to root along every
    /// path (radius-zero fusions of double zeros sit at the very bottom).
    pub fn radii_increase_rootward(&self) -> bool {
        self.nodes.iter().all(|n| {
            n.children.iter().all(|c| match c {
                MergeChild::Leaf(_) => true,
                MergeChild::Node(i) => self.nodes[*i].merge_radius < n.merge_radius,
            })
        })
    }
}

struct Dsu {
    parent: Vec<u32>,
    /// Tree handle of the cluster containing this root, if it holds seeds.
    handle: Vec<Option<MergeChild>>,
}

impl Dsu {
    fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut c = x;
        while self.parent[c as usize] != r {
            let next = self.parent[c as usize];
            self.parent[c as usize] = r;
            c = next;
        }
        r
    }
}

/// Build the merge tree for one strip.
///
/// `zeros` are the strip's zeros of f (any order); `in_strip` decides grid
/// membership. The grid must resolve the zero separations.
pub fn build_merge_tree(
    map: &(impl AnalyticMap + ?Sized),
    grid: &FieldGrid,
    in_strip: &dyn Fn(Complex64) -> bool,
    strip_index: i64,
    zeros: &[ZeroRecord],
    partial: bool,
    tol: f64,
    cfg: &Tolerances,
) -> Result<MergeTree, ZeroError> {
    if zeros.is_empty() {
        return Err(ZeroError::ComponentTrackingLoss(
            "merge tree requested for a strip without zeros".into(),
        ));
    }
    // Expand multiplicity: an order-2 zero contributes two leaves fused at
    // radius zero with the zero itself as the branch point (f' vanishes
    // there).
    let mut leaves = Vec::new();
    let mut nodes: Vec<MergeNode> = Vec::new();
    let mut seed_handles: Vec<(Complex64, MergeChild)> = Vec::new();
    for z in zeros {
        match z.order {
            1 => {
                leaves.push(z.location);
                seed_handles.push((z.location, MergeChild::Leaf(leaves.len() - 1)));
            }
            2 => {
                leaves.push(z.location);
                leaves.push(z.location);
                nodes.push(MergeNode {
                    branch_point: z.location,
                    merge_radius: 0.0,
                    children: [
                        MergeChild::Leaf(leaves.len() - 2),
                        MergeChild::Leaf(leaves.len() - 1),
                    ],
                });
                seed_handles.push((z.location, MergeChild::Node(nodes.len() - 1)));
            }
            o => {
                return Err(ZeroError::OrderExceedsTwo(z.location)).map_err(|e| {
                    let _ = o;
                    e
                })
            }
        }
    }
    if seed_handles.len() == 1 {
        let root_radius = nodes.last().map(|n| n.merge_radius).unwrap_or(0.0);
        return Ok(MergeTree {
            strip: strip_index,
            leaves,
            nodes,
            root_radius,
            partial,
        });
    }

    // Collect in-strip grid nodes and sort by |f|.
    let w = grid.window;
    let mut members: Vec<u32> = Vec::new();
    let mut member_of = vec![u32::MAX; w.nx * w.ny];
    for j in 0..w.ny {
        for i in 0..w.nx {
            let s = w.node(i, j);
            let v = grid.value(i, j);
            if v.re.is_finite() && in_strip(s) {
                member_of[w.index(i, j)] = members.len() as u32;
                members.push(w.index(i, j) as u32);
            }
        }
    }
    let mut order: Vec<u32> = (0..members.len() as u32).collect();
    order.sort_by(|&a, &b| {
        let fa = grid.f[members[a as usize] as usize].norm();
        let fb = grid.f[members[b as usize] as usize].norm();
        fa.partial_cmp(&fb).unwrap().then(a.cmp(&b))
    });

    let mut dsu = Dsu {
        parent: (0..members.len() as u32).collect(),
        handle: vec![None; members.len()],
    };
    // Attach each seed to its nearest in-strip grid node.
    for (loc, handle) in &seed_handles {
        let (i, j) = w.nearest_node(*loc);
        let mut attached = false;
        'search: for radius in 0..6_isize {
            for dj in -radius..=radius {
                for di in -radius..=radius {
                    let (ii, jj) = (i as isize + di, j as isize + dj);
                    if ii < 0 || jj < 0 || ii >= w.nx as isize || jj >= w.ny as isize {
                        continue;
                    }
                    let m = member_of[w.index(ii as usize, jj as usize)];
                    if m != u32::MAX {
                        if dsu.handle[m as usize].is_some() {
                            return Err(ZeroError::ComponentTrackingLoss(format!(
                                "two zeros share the grid cell near {loc}; grid too coarse"
                            )));
                        }
                        dsu.handle[m as usize] = Some(*handle);
                        attached = true;
                        break 'search;
                    }
                }
            }
        }
        if !attached {
            return Err(ZeroError::ComponentTrackingLoss(format!(
                "zero at {loc} has no in-strip grid node nearby"
            )));
        }
    }

    // Kruskal-style sweep: process nodes by increasing |f| and union with
    // already-processed neighbors; a union joining two seeded clusters is a
    // merge event.
    let dmap = Shifted { base: map, by: 1 };
    let mut processed = vec![false; members.len()];
    for &m in &order {
        let gi = members[m as usize] as usize;
        let (i, j) = (gi % w.nx, gi / w.nx);
        processed[m as usize] = true;
        for (di, dj) in [(-1isize, 0isize), (1, 0), (0, -1), (0, 1)] {
            let (ii, jj) = (i as isize + di, j as isize + dj);
            if ii < 0 || jj < 0 || ii >= w.nx as isize || jj >= w.ny as isize {
                continue;
            }
            let nm = member_of[w.index(ii as usize, jj as usize)];
            if nm == u32::MAX || !processed[nm as usize] {
                continue;
            }
            let ra = dsu.find(m);
            let rb = dsu.find(nm);
            if ra == rb {
                continue;
            }
            let ha = dsu.handle[ra as usize];
            let hb = dsu.handle[rb as usize];
            let merged_handle = match (ha, hb) {
                (Some(a), Some(b)) => {
                    // Merge event at this grid level: refine the saddle to a
                    // certified zero of f'.
                    let seed = w.node(i, j);
                    let (v, vjet) = newton_refine(&dmap, seed, tol, cfg)
                        .map_err(|_| ZeroError::DerivativeZeroNotFound(seed))?;
                    let fjet = map.jet(v, tol)?;
                    if fjet.d1().norm() > cfg.zero_residual.max(64.0 * vjet.err[0]) {
                        return Err(ZeroError::DerivativeZeroNotFound(seed));
                    }
                    let radius = fjet.f().norm();
                    nodes.push(MergeNode {
                        branch_point: v,
                        merge_radius: radius,
                        children: [a, b],
                    });
                    Some(MergeChild::Node(nodes.len() - 1))
                }
                (Some(a), None) => Some(a),
                (None, Some(b)) => Some(b),
                (None, None) => None,
            };
            dsu.parent[ra as usize] = rb;
            dsu.handle[rb as usize] = merged_handle;
            dsu.handle[ra as usize] = None;
        }
    }

    let tree = MergeTree {
        strip: strip_index,
        root_radius: nodes.last().map(|n| n.merge_radius).unwrap_or(0.0),
        leaves,
        nodes,
        partial,
    };
    if !tree.is_full_binary() {
        return Err(ZeroError::ComponentTrackingLoss(format!(
            "strip {strip_index}: {} leaves but {} internal nodes",
            tree.leaf_count(),
            tree.internal_count()
        )));
    }
    if !tree.radii_increase_rootward() {
        return Err(ZeroError::ComponentTrackingLoss(format!(
            "strip {strip_index}: merge radii do not increase rootward"
        )));
    }
    Ok(tree)
}
