//! Zero-level contours of a sampled scalar field by marching squares.

use std::collections::HashMap;

/// A polyline in fractional grid-index coordinates `(i, j)`.
pub type Polyline = Vec<(f64, f64)>;

fn edge_h(i: usize, j: usize, nx: usize) -> usize {
    2 * (j * nx + i)
}

fn edge_v(i: usize, j: usize, nx: usize) -> usize {
    2 * (j * nx + i) + 1
}

fn cross(a: f64, b: f64) -> f64 {
    let t = a / (a - b);
    if t.is_finite() {
        t.clamp(0.0, 1.0)
    } else {
        0.5
    }
}

/// Traces the zero set of `values` (row-major, `nx` columns, `ny` rows) with
/// linear interpolation along cell edges. Cells with a non-finite corner are
/// skipped; saddle cells are resolved by the sign of the corner mean. The
/// output order depends only on the input.
pub fn marching_squares(values: &[f64], nx: usize, ny: usize) -> Vec<Polyline> {
    assert_eq!(values.len(), nx * ny, "field size does not match grid");
    if nx < 2 || ny < 2 {
        return Vec::new();
    }
    let at = |i: usize, j: usize| values[j * nx + i];
    let mut points: HashMap<usize, (f64, f64)> = HashMap::new();
    let mut segments: Vec<(usize, usize)> = Vec::new();

    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let v = [at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)];
            if v.iter().any(|x| !x.is_finite()) {
                continue;
            }
            let pos = v.map(|x| x > 0.0);
            let case = pos.iter().enumerate().fold(0, |acc, (k, &p)| acc | ((p as u8) << k));
            if case == 0 || case == 15 {
                continue;
            }
            // Edges: 0 bottom, 1 right, 2 top, 3 left.
            let ids = [
                edge_h(i, j, nx),
                edge_v(i + 1, j, nx),
                edge_h(i, j + 1, nx),
                edge_v(i, j, nx),
            ];
            let (fi, fj) = (i as f64, j as f64);
            let loc = [
                (fi + cross(v[0], v[1]), fj),
                (fi + 1.0, fj + cross(v[1], v[2])),
                (fi + cross(v[3], v[2]), fj + 1.0),
                (fi, fj + cross(v[0], v[3])),
            ];
            let crossed: Vec<usize> = (0..4).filter(|&e| pos[e] != pos[(e + 1) % 4]).collect();
            let pairs: Vec<(usize, usize)> = if crossed.len() == 2 {
                vec![(crossed[0], crossed[1])]
            } else {
                let center_pos = v.iter().sum::<f64>() > 0.0;
                // Corners 0 and 2 share a sign in a saddle cell.
                if center_pos == pos[0] {
                    vec![(0, 1), (2, 3)]
                } else {
                    vec![(3, 0), (1, 2)]
                }
            };
            for (a, b) in pairs {
                points.entry(ids[a]).or_insert(loc[a]);
                points.entry(ids[b]).or_insert(loc[b]);
                segments.push((ids[a], ids[b]));
            }
        }
    }
    assemble(&segments, &points)
}

fn assemble(segments: &[(usize, usize)], points: &HashMap<usize, (f64, f64)>) -> Vec<Polyline> {
    let mut by_edge: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, &(a, b)) in segments.iter().enumerate() {
        by_edge.entry(a).or_default().push(k);
        by_edge.entry(b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a, b) = segments[start];
        let forward = walk(b, segments, &by_edge, &mut used);
        let backward = walk(a, segments, &by_edge, &mut used);
        let mut chain: Vec<usize> = backward.into_iter().rev().collect();
        chain.push(a);
        chain.push(b);
        chain.extend(forward);
        out.push(chain.iter().map(|e| points[e]).collect());
    }
    out
}

/// Follows unused segments from edge `from`, returning the edges visited.
fn walk(
    mut from: usize,
    segments: &[(usize, usize)],
    by_edge: &HashMap<usize, Vec<usize>>,
    used: &mut [bool],
) -> Vec<usize> {
    let mut chain = Vec::new();
    loop {
        let next = by_edge[&from].iter().copied().find(|&k| !used[k]);
        let Some(k) = next else { break };
        used[k] = true;
        let (a, b) = segments[k];
        from = if a == from { b } else { a };
        chain.push(from);
    }
    chain
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_is_one_closed_loop() {
        let n = 41;
        let mut v = vec![0.0; n * n];
        for j in 0..n {
            for i in 0..n {
                let (x, y) = (i as f64 - 20.0, j as f64 - 20.0);
                v[j * n + i] = x * x + y * y - 100.5;
            }
        }
        let lines = marching_squares(&v, n, n);
        assert_eq!(lines.len(), 1);
        let l = &lines[0];
        assert_eq!(l.first(), l.last());
        for &(x, y) in l {
            let r = ((x - 20.0).powi(2) + (y - 20.0).powi(2)).sqrt();
            assert!((r - 100.5f64.sqrt()).abs() < 0.1);
        }
    }

    #[test]
    fn horizontal_line() {
        let (nx, ny) = (10, 5);
        let v: Vec<f64> = (0..nx * ny).map(|k| (k / nx) as f64 - 2.25).collect();
        let lines = marching_squares(&v, nx, ny);
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].len(), nx);
        assert!(lines[0].iter().all(|p| (p.1 - 2.25).abs() < 1e-12));
    }

    #[test]
    fn constant_field_has_no_contours() {
        assert!(marching_squares(&[1.0; 16], 4, 4).is_empty());
    }
}
