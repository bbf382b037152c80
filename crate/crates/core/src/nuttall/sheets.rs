//! Sheet labels `S₀, S₁, S₂` on a rectangular grid and the curves `Γ_{jk}`
//! separating them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::marching::marching_squares;
use super::{rot, u_value, NuttallContext};
use crate::error::{Error, Result};
use crate::C64;

/// Index pairs `(j, k)` of the curves `Γ_{jk}`, in output order.
pub const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Nodes closer than this to a singular point of `u` are moved by half a pixel.
const NUDGE_RADIUS: f64 = 1e-9;

/// Default tie margin for component counting.
pub const COMPONENT_MARGIN: f64 = 1e-3;

/// Ties are flagged when `|u_j − u_k|` is below this multiple of the local
/// one-cell variation of the difference.
const TIE_FRACTION: f64 = 1e-3;

/// A rectangle sampled at pixel centers: node `(i, j)` sits at
/// `(xmin + (i + ½)dx, ymin + (j + ½)dy)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::standard(800)
    }
}

impl GridSpec {
    /// `[−√3, √3] × [−1.5, 3]` at `n × n`.
    pub fn standard(n: usize) -> Self {
        let s = 3f64.sqrt();
        GridSpec {
            xmin: -s,
            xmax: s,
            ymin: -1.5,
            ymax: 3.0,
            nx: n,
            ny: n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.xmin, self.xmax, self.ymin, self.ymax].iter().all(|v| v.is_finite());
        if !finite || self.xmax <= self.xmin || self.ymax <= self.ymin {
            return Err(Error::InvalidArgument("grid bounds must be finite with min < max".into()));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::InvalidArgument("grid needs at least 2 nodes per axis".into()));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.xmax - self.xmin) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.ymax - self.ymin) / self.ny as f64
    }

    /// World position of fractional index `(fi, fj)`.
    pub fn world(&self, fi: f64, fj: f64) -> C64 {
        C64::new(
            self.xmin + (fi + 0.5) * self.dx(),
            self.ymin + (fj + 0.5) * self.dy(),
        )
    }

    pub fn node(&self, i: usize, j: usize) -> C64 {
        self.world(i as f64, j as f64)
    }
}

/// Polylines approximating `Γ_{jk}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Contour {
    pub pair: (usize, usize),
    pub polylines: Vec<Vec<C64>>,
}

/// Sheet labels on a grid, row-major with `nx` columns.
#[derive(Clone, Debug, PartialEq)]
pub struct SheetField {
    pub grid: GridSpec,
    pub alpha: C64,
    /// 0, 1 or 2 per node.
    pub labels: Vec<u8>,
    /// Bit `p` is set when the node lies in the tie band of `PAIRS[p]`.
    pub ties: Vec<u8>,
    pub contours: Vec<Contour>,
}

impl SheetField {
    pub fn label(&self, i: usize, j: usize) -> u8 {
        self.labels[j * self.grid.nx + i]
    }

    pub fn contour(&self, pair: (usize, usize)) -> Option<&Contour> {
        self.contours.iter().find(|c| c.pair == pair)
    }
}

/// `(u(z), u(ze^{2πi/3}), u(ze^{−2πi/3}))`.
fn triple(z: C64, ctx: &NuttallContext) -> Result<[f64; 3]> {
    Ok([u_value(z, ctx)?, u_value(z * rot(), ctx)?, u_value(z * rot().conj(), ctx)?])
}

/// Rank of the first entry: 0 when it is the largest, 2 when the smallest.
/// Equal values are resolved in favor of the lower index.
fn rank(u: [f64; 3]) -> u8 {
    u[1..].iter().filter(|&&v| v > u[0]).count() as u8
}

/// Index of the sheet containing the point over `z`.
pub fn sheet_label(z: C64, ctx: &NuttallContext) -> Result<u8> {
    Ok(rank(triple(z, ctx)?))
}

fn nudge(z: C64, ctx: &NuttallContext, step: f64) -> C64 {
    let lat = ctx.lattice();
    let near = [C64::new(1.0, 0.0), rot(), rot().conj()]
        .iter()
        .any(|r| lat.distance_to_lattice(z - ctx.alpha * r) < NUDGE_RADIUS);
    if near {
        z + step
    } else {
        z
    }
}

/// Evaluates the three rotated copies of `u` on the grid, labels each node
/// with its sheet and traces `Γ₀₁, Γ₀₂, Γ₁₂` by marching squares.
pub fn classify_sheets(ctx: &NuttallContext, grid: &GridSpec) -> Result<SheetField> {
    grid.validate()?;
    let (nx, ny) = (grid.nx, grid.ny);
    let half = 0.5 * grid.dx();
    let values: Vec<[f64; 3]> = (0..nx * ny)
        .into_par_iter()
        .map(|k| triple(nudge(grid.node(k % nx, k / nx), ctx, half), ctx))
        .collect::<Result<_>>()?;
    let labels: Vec<u8> = values.iter().map(|&u| rank(u)).collect();

    let mut ties = vec![0u8; nx * ny];
    let mut contours = Vec::with_capacity(PAIRS.len());
    for (p, &(a, b)) in PAIRS.iter().enumerate() {
        let diff: Vec<f64> = values.iter().map(|u| u[a] - u[b]).collect();
        for j in 0..ny {
            for i in 0..nx {
                let k = j * nx + i;
                let mut var: f64 = 0.0;
                if i + 1 < nx {
                    var = var.max((diff[k + 1] - diff[k]).abs());
                }
                if i > 0 {
                    var = var.max((diff[k] - diff[k - 1]).abs());
                }
                if j + 1 < ny {
                    var = var.max((diff[k + nx] - diff[k]).abs());
                }
                if j > 0 {
                    var = var.max((diff[k] - diff[k - nx]).abs());
                }
                if diff[k].abs() < TIE_FRACTION * var {
                    ties[k] |= 1 << p;
                }
            }
        }
        let polylines = marching_squares(&diff, nx, ny)
            .into_iter()
            .map(|line| line.into_iter().map(|(fi, fj)| grid.world(fi, fj)).collect())
            .collect();
        contours.push(Contour {
            pair: (a, b),
            polylines,
        });
    }
    Ok(SheetField {
        grid: *grid,
        alpha: ctx.alpha,
        labels,
        ties,
        contours,
    })
}

/// Sheet index with margin: `Some(j)` when `u(z)` beats or trails the other
/// two values by more than `margin` as sheet `j` requires, `None` otherwise.
fn strict_rank(u: [f64; 3], margin: f64) -> Option<u8> {
    let d1 = u[0] - u[1];
    let d2 = u[0] - u[2];
    if d1.abs() <= margin || d2.abs() <= margin {
        return None;
    }
    Some(rank(u))
}

/// Connected components of sheet `sheet` on the torus, from an `n × n` grid in
/// period coordinates with 4-neighbor adjacency and wrap-around. Nodes whose
/// `u`-differences fall within `margin` of a tie belong to no sheet, so pieces
/// touching at a single point count separately.
pub fn sheet_components(ctx: &NuttallContext, sheet: u8, n: usize, margin: f64) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidArgument("torus grid needs n >= 2".into()));
    }
    let lat = *ctx.lattice();
    let half = 0.5 * lat.omega1().norm() / n as f64;
    let labels: Vec<Option<u8>> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let s = ((k % n) as f64 + 0.5) / n as f64;
            let t = ((k / n) as f64 + 0.5) / n as f64;
            let z = nudge(lat.omega1() * s + lat.omega2() * t, ctx, half);
            Ok(strict_rank(triple(z, ctx)?, margin))
        })
        .collect::<Result<_>>()?;
    let inside = |k: usize| labels[k] == Some(sheet);

    let mut parent: Vec<usize> = (0..n * n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for j in 0..n {
        for i in 0..n {
            let k = j * n + i;
            if !inside(k) {
                continue;
            }
            for m in [j * n + (i + 1) % n, ((j + 1) % n) * n + i] {
                if inside(m) {
                    let (ra, rb) = (find(&mut parent, k), find(&mut parent, m));
                    if ra != rb {
                        parent[ra.max(rb)] = ra.min(rb);
                    }
                }
            }
        }
    }
    let mut count = 0;
    for k in 0..n * n {
        if inside(k) && find(&mut parent, k) == k {
            count += 1;
        }
    }
    Ok(count)
}

/// Interior nodes whose label differs from all eight neighbors. Diagonal
/// neighbors are included because sheet `S₁` meets each branch point in two
/// 60° wedges, which can fall between the axis directions.
pub fn speckle_count(field: &SheetField) -> usize {
    let (nx, ny) = (field.grid.nx, field.grid.ny);
    let mut count = 0;
    for j in 1..ny.saturating_sub(1) {
        for i in 1..nx.saturating_sub(1) {
            let l = field.label(i, j);
            let lonely = (j - 1..=j + 1)
                .flat_map(|jj| (i - 1..=i + 1).map(move |ii| (ii, jj)))
                .filter(|&p| p != (i, j))
                .all(|(ii, jj)| field.label(ii, jj) != l);
            if lonely {
                count += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_orders_sheets() {
        assert_eq!(rank([3.0, 1.0, 2.0]), 0);
        assert_eq!(rank([2.0, 1.0, 3.0]), 1);
        assert_eq!(rank([0.0, 1.0, 3.0]), 2);
        assert_eq!(rank([1.0, 1.0, 0.0]), 0);
    }

    #[test]
    fn small_grid_has_all_three_sheets() {
        let ctx = NuttallContext::real(0.5).unwrap();
        let f = classify_sheets(&ctx, &GridSpec::standard(40)).unwrap();
        for s in 0..3 {
            assert!(f.labels.contains(&s));
        }
        assert_eq!(f.contours.len(), 3);
    }
}
