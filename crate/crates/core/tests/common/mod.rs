#![allow(dead_code)]

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relcoh::finspace::{ContinuousMap, FinSpace, PointSet, Sheaf};
use relcoh::homalg::{ChainMap, Complex};
use relcoh::ratlin::{int, kernel, quotient, Matrix, Scalar, Subspace};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_int(r: &mut impl Rng) -> Scalar {
    int(r.gen_range(-3..=3))
}

pub fn random_matrix(r: &mut impl Rng, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if r.gen_bool(0.6) {
                m.set(i, j, small_int(r));
            }
        }
    }
    m
}

pub fn random_invertible(r: &mut impl Rng, n: usize) -> Matrix {
    loop {
        let m = random_matrix(r, n, n);
        if m.rank() == n {
            return m;
        }
    }
}

/// A random complex in degrees `lo..=lo+len-1`, conjugated from a split normal form
/// so that every shape of cohomology occurs.
pub fn random_complex(r: &mut impl Rng, lo: i32, len: usize, max_dim: usize) -> Complex {
    let mut h = Vec::new();
    let mut c = Vec::new();
    let mut dims = Vec::new();
    for q in 0..len {
        let prev = if q == 0 { 0 } else { c[q - 1] };
        let room = max_dim.saturating_sub(prev);
        let hq = r.gen_range(0..=room.min(2));
        let cq = if q + 1 == len { 0 } else { r.gen_range(0..=(room - hq).min(2)) };
        h.push(hq);
        c.push(cq);
        dims.push(hq + prev + cq);
    }
    let p: Vec<Matrix> = dims.iter().map(|&d| random_invertible(r, d)).collect();
    let pinv: Vec<Matrix> = p.iter().map(|m| m.inverse().unwrap()).collect();
    let diffs = (0..len)
        .map(|q| {
            let next = dims.get(q + 1).copied().unwrap_or(0);
            let mut d = Matrix::zeros(next, dims[q]);
            if q + 1 < len {
                // C_q → B_{q+1} by the identity; B_{q+1} sits right after H_{q+1}.
                for i in 0..c[q] {
                    d.set(h[q + 1] + i, h[q] + (if q == 0 { 0 } else { c[q - 1] }) + i, int(1));
                }
                &(&p[q + 1] * &d) * &pinv[q]
            } else {
                d
            }
        })
        .collect();
    Complex::new(lo, dims, diffs).unwrap()
}

/// A random element of the space of chain maps `k → l`.
pub fn random_chain_map(r: &mut impl Rng, k: &Complex, l: &Complex) -> ChainMap {
    let lo = k.lo().min(l.lo());
    let hi = k.hi().max(l.hi());
    let mut offsets = Vec::new();
    let mut n = 0;
    for q in lo..=hi {
        offsets.push(n);
        n += l.dim(q) * k.dim(q);
    }
    let off = |q: i32| offsets[(q - lo) as usize];
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for q in lo..=hi {
        // d_L φ^q − φ^{q+1} d_K = 0, entry (i, j) of a dim L^{q+1} × dim K^q matrix.
        let (dl, dk) = (l.d(q), k.d(q));
        for i in 0..l.dim(q + 1) {
            for j in 0..k.dim(q) {
                let mut row = vec![int(0); n];
                for a in 0..l.dim(q) {
                    row[off(q) + a * k.dim(q) + j] += dl.get(i, a);
                }
                if q < hi {
                    for b in 0..k.dim(q + 1) {
                        row[off(q + 1) + i * k.dim(q + 1) + b] -= dk.get(b, j);
                    }
                }
                rows.push(row);
            }
        }
    }
    let space = if rows.is_empty() {
        Subspace::full(n)
    } else {
        kernel(&Matrix::from_rows(rows).unwrap())
    };
    let mut x = vec![int(0); n];
    for c in 0..space.dim() {
        let w = small_int(r);
        for (xi, b) in x.iter_mut().zip(space.basis().column(c)) {
            *xi += &w * b;
        }
    }
    ChainMap::new(k.clone(), l.clone(), |q| {
        if q < lo || q > hi {
            return Matrix::zeros(l.dim(q), k.dim(q));
        }
        let mut m = Matrix::zeros(l.dim(q), k.dim(q));
        for a in 0..l.dim(q) {
            for b in 0..k.dim(q) {
                m.set(a, b, x[off(q) + a * k.dim(q) + b].clone());
            }
        }
        m
    })
    .unwrap()
}

/// A random finite T0 space on `n` points.
pub fn random_space(r: &mut impl Rng, n: usize) -> Arc<FinSpace> {
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if r.gen_bool(0.4) {
                edges.push((i, j));
            }
        }
    }
    Arc::new(FinSpace::from_hasse(labels, &edges).unwrap())
}

/// `x ↦ ℚ^n / W_x` with `W_x` spanned by random vectors attached to the points
/// below `x`; restrictions are the induced quotient maps.
pub fn random_sheaf(r: &mut impl Rng, space: &Arc<FinSpace>, n: usize) -> Sheaf {
    let vecs: Vec<Option<Vec<Scalar>>> = (0..space.len())
        .map(|_| r.gen_bool(0.5).then(|| (0..n).map(|_| small_int(r)).collect()))
        .collect();
    let quos: Vec<_> = (0..space.len())
        .map(|x| {
            let below: Vec<Vec<Scalar>> = space.down(x).iter().filter_map(|z| vecs[z].clone()).collect();
            let w = Subspace::span(&Matrix::from_columns(n, &below));
            quotient(&Subspace::full(n), &w).unwrap()
        })
        .collect();
    let dims = quos.iter().map(|q| q.dim).collect();
    Sheaf::from_all_pairs(space.clone(), dims, |x, y| &quos[y].projector * &quos[x].lift).unwrap()
}

pub fn random_open(r: &mut impl Rng, space: &FinSpace) -> PointSet {
    let opens = space.opens();
    opens[r.gen_range(0..opens.len())]
}

/// A random continuous map, found by rejection; falls back to a constant map.
pub fn random_map(r: &mut impl Rng, source: &Arc<FinSpace>, target: &Arc<FinSpace>) -> ContinuousMap {
    for _ in 0..50 {
        let map = (0..source.len()).map(|_| r.gen_range(0..target.len())).collect();
        if let Ok(f) = ContinuousMap::new(source.clone(), target.clone(), map) {
            return f;
        }
    }
    ContinuousMap::new(source.clone(), target.clone(), vec![0; source.len()]).unwrap()
}

/// A random covering of the whole space by at most `max` opens.
pub fn random_cover(r: &mut impl Rng, space: &FinSpace, max: usize) -> Vec<PointSet> {
    let opens: Vec<PointSet> = space.opens().into_iter().filter(|o| !o.is_empty()).collect();
    loop {
        let k = r.gen_range(1..=max);
        let cover: Vec<PointSet> = (0..k).map(|_| opens[r.gen_range(0..opens.len())]).collect();
        if cover.iter().fold(PointSet::EMPTY, |a, &b| a.union(b)) == space.all() {
            return cover;
        }
    }
}

pub fn random_vector_in(r: &mut impl Rng, s: &Subspace) -> Vec<Scalar> {
    let mut v = vec![int(0); s.ambient_dim()];
    for c in 0..s.dim() {
        let w = small_int(r);
        for (a, b) in v.iter_mut().zip(s.basis().column(c)) {
            *a += &w * b;
        }
    }
    v
}
