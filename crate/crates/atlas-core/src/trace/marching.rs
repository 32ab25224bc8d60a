//! Marching squares over the sign grid of the level function, with linear
//! interpolation along cell edges and midpoint resolution of saddle cells,
//! followed by deterministic linking of the per-cell segments into chains.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::TraceError;
use crate::grid::FieldGrid;
use crate::trace::{LevelSet, Source};

/// A crossing on a grid edge: its interpolated location.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Crossing {
    pub at: Complex64,
}

/// Edge id: horizontal edges (between (i,j) and (i+1,j)) are even,
/// vertical edges (between (i,j) and (i,j+1)) odd.
fn h_edge(nx: usize, i: usize, j: usize) -> u64 {
    ((j * nx + i) as u64) << 1
}

fn v_edge(nx: usize, i: usize, j: usize) -> u64 {
    (((j * nx + i) as u64) << 1) | 1
}

pub(crate) fn level_value(
    grid: &FieldGrid,
    source: Source,
    levelset: LevelSet,
    i: usize,
    j: usize,
) -> f64 {
    let v = match source {
        Source::F => grid.value(i, j),
        Source::FPrime => grid.deriv(i, j),
    };
    match levelset {
        LevelSet::ImZero => v.im,
        LevelSet::AbsEq(r) => v.norm() - r,
    }
}

/// Extract linked chains of crossing points. Each chain is a list of edge
/// crossings; open chains start and end on the window boundary.
pub(crate) fn extract(
    grid: &FieldGrid,
    source: Source,
    levelset: LevelSet,
) -> Result<Vec<Vec<Crossing>>, TraceError> {
    let w = grid.window;
    let (nx, ny) = (w.nx, w.ny);
    let val = |i: usize, j: usize| level_value(grid, source, levelset, i, j);
    // Sign with zero pushed to positive: exact zeros at nodes are measure
    // rare after cell-centering; nudging avoids degenerate cases.
    let pos = |x: f64| x >= 0.0;

    let mut crossings: BTreeMap<u64, Crossing> = BTreeMap::new();
    let mut links: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    let mut add_link = |a: u64, b: u64| {
        links.entry(a).or_default().push(b);
        links.entry(b).or_default().push(a);
    };

    let interp = |pa: Complex64, va: f64, pb: Complex64, vb: f64| -> Complex64 {
        let t = va / (va - vb);
        pa + (pb - pa) * t.clamp(0.0, 1.0)
    };

    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let v00 = val(i, j);
            let v10 = val(i + 1, j);
            let v11 = val(i + 1, j + 1);
            let v01 = val(i, j + 1);
            if !(v00.is_finite() && v10.is_finite() && v11.is_finite() && v01.is_finite()) {
                continue;
            }
            let case = (pos(v00) as u8)
                | (pos(v10) as u8) << 1
                | (pos(v11) as u8) << 2
                | (pos(v01) as u8) << 3;
            if case == 0 || case == 15 {
                continue;
            }
            let p00 = w.node(i, j);
            let p10 = w.node(i + 1, j);
            let p11 = w.node(i + 1, j + 1);
            let p01 = w.node(i, j + 1);
            // Cell edges: bottom, right, top, left.
            let e_b = h_edge(nx, i, j);
            let e_r = v_edge(nx, i + 1, j);
            let e_t = h_edge(nx, i, j + 1);
            let e_l = v_edge(nx, i, j);
            let mut put = |edge: u64, pa: Complex64, va: f64, pb: Complex64, vb: f64| {
                crossings.entry(edge).or_insert_with(|| Crossing {
                    at: interp(pa, va, pb, vb),
                });
                edge
            };
            // Segment table keyed by the sign case.
            let mut seg = |ea: (u64, Complex64, f64, Complex64, f64),
                           eb: (u64, Complex64, f64, Complex64, f64)| {
                let a = put(ea.0, ea.1, ea.2, ea.3, ea.4);
                let bb = put(eb.0, eb.1, eb.2, eb.3, eb.4);
                add_link(a, bb);
            };
            let bot = (e_b, p00, v00, p10, v10);
            let right = (e_r, p10, v10, p11, v11);
            let top = (e_t, p01, v01, p11, v11);
            let left = (e_l, p00, v00, p01, v01);
            match case {
                1 | 14 => seg(bot, left),
                2 | 13 => seg(bot, right),
                3 | 12 => seg(left, right),
                4 | 11 => seg(top, right),
                6 | 9 => seg(bot, top),
                7 | 8 => seg(top, left),
                5 | 10 => {
                    // Saddle: resolve by the sign at the cell center.
                    let center = 0.25 * (v00 + v10 + v11 + v01);
                    let connect_first = pos(center) == (case == 5);
                    if connect_first {
                        seg(bot, left);
                        seg(top, right);
                    } else {
                        seg(bot, right);
                        seg(top, left);
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    // Walk chains deterministically: open chains first (endpoints have
    // degree 1), seeded in increasing edge order, then remaining loops.
    let mut visited: BTreeMap<u64, bool> = BTreeMap::new();
    let mut chains: Vec<Vec<Crossing>> = Vec::new();
    let degree_one: Vec<u64> = links
        .iter()
        .filter(|(_, v)| v.len() == 1)
        .map(|(k, _)| *k)
        .collect();
    let walk = |start: u64, visited: &mut BTreeMap<u64, bool>| -> Vec<Crossing> {
        let mut chain = Vec::new();
        let mut prev: Option<u64> = None;
        let mut cur = start;
        loop {
            visited.insert(cur, true);
            chain.push(crossings[&cur]);
            let nexts = &links[&cur];
            let next = nexts
                .iter()
                .find(|&&n| Some(n) != prev && !visited.get(&n).copied().unwrap_or(false));
            match next {
                Some(&n) => {
                    prev = Some(cur);
                    cur = n;
                }
                None => {
                    // Close loops explicitly by repeating the start.
                    if nexts.iter().any(|&n| n == start) && chain.len() > 2 {
                        chain.push(crossings[&start]);
                    }
                    break;
                }
            }
        }
        chain
    };
    for start in degree_one {
        if !visited.get(&start).copied().unwrap_or(false) {
            chains.push(walk(start, &mut visited));
        }
    }
    let keys: Vec<u64> = links.keys().copied().collect();
    for start in keys {
        if !visited.get(&start).copied().unwrap_or(false) {
            chains.push(walk(start, &mut visited));
        }
    }
    chains.retain(|c| c.len() >= 3);
    Ok(chains)
}
