//! Simplicial homology over a field: Betti numbers by boundary rank and the maps
//! induced on homology by inclusions.

use crate::complex::{Convention, SimplicialComplex, vr_complex};
use crate::error::{Error, Result};
use crate::field::{Field, FieldTag};
use crate::linalg::{EchelonBasis, Vector, kernel};
use crate::metric::DistanceMatrix;
use crate::number::Rational;
use crate::with_field;
use std::collections::HashMap;

/// Sparse boundary columns of `∂_k` (rows index `(k-1)`-simplices), sorted by row.
fn sparse_boundary<F: Field>(f: &F, c: &SimplicialComplex, k: usize) -> Vec<Vec<(usize, F::E)>> {
    if k == 0 {
        return vec![Vec::new(); c.simplices(0).len()];
    }
    let index = c.index(k - 1);
    c.simplices(k)
        .iter()
        .map(|s| {
            let mut col: Vec<(usize, F::E)> = (0..s.len())
                .map(|i| {
                    let face: Vec<usize> =
                        s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
                    let sign = if i % 2 == 0 { f.one() } else { f.neg(&f.one()) };
                    (index[face.as_slice()], sign)
                })
                .collect();
            col.sort_by_key(|(r, _)| *r);
            col
        })
        .collect()
}

/// Rank of a sparse matrix by column reduction on the lowest nonzero row.
fn sparse_rank<F: Field>(f: &F, cols: Vec<Vec<(usize, F::E)>>) -> usize {
    let mut pivots: HashMap<usize, Vec<(usize, F::E)>> = HashMap::new();
    for mut col in cols {
        while let Some((low, val)) = col.last().cloned() {
            let Some(pcol) = pivots.get(&low) else { break };
            let factor = f.mul(&val, &f.inv(&pcol.last().expect("pivot column").1));
            col = axpy(f, &col, pcol, &factor);
        }
        if let Some((low, _)) = col.last() {
            pivots.insert(*low, col);
        }
    }
    pivots.len()
}

/// `a - factor * b` for sorted sparse vectors.
pub(crate) fn axpy<F: Field>(f: &F, a: &[(usize, F::E)], b: &[(usize, F::E)], factor: &F::E) -> Vec<(usize, F::E)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ra = a.get(i).map_or(usize::MAX, |x| x.0);
        let rb = b.get(j).map_or(usize::MAX, |x| x.0);
        if ra < rb {
            out.push(a[i].clone());
            i += 1;
        } else if rb < ra {
            out.push((rb, f.neg(&f.mul(factor, &b[j].1))));
            j += 1;
        } else {
            let v = f.sub(&a[i].1, &f.mul(factor, &b[j].1));
            if !f.is_zero(&v) {
                out.push((ra, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Betti numbers of `c` in degrees `0..=c.exact_through()` over a generic field.
pub fn betti_numbers<F: Field>(f: &F, c: &SimplicialComplex) -> Vec<usize> {
    let top = c.exact_through();
    let ranks: Vec<usize> = (0..=top + 1).map(|k| sparse_rank(f, sparse_boundary(f, c, k))).collect();
    (0..=top).map(|k| c.simplices(k).len() - ranks[k] - ranks[k + 1]).collect()
}

/// Betti numbers of `c` in degrees `0..=c.exact_through()`.
pub fn homology_ranks(c: &SimplicialComplex, field: FieldTag) -> Vec<usize> {
    with_field!(field, f => betti_numbers(&f, c))
}

/// Betti numbers of the open complex `VR_r(m)` in degrees `0..=maxdim`.
pub fn vr_betti(m: &DistanceMatrix, r: &Rational, maxdim: usize, field: FieldTag) -> Vec<usize> {
    homology_ranks(&vr_complex(m, r, maxdim, Convention::Open), field)
}

/// A homology basis of `H_k`: boundary vectors inserted first, then cycle
/// representatives extending them.
pub struct HomologyBasis<F: Field> {
    basis: EchelonBasis<F>,
    boundary_rank: usize,
    /// Cycle representatives, as vectors over the `k`-simplices.
    pub reps: Vec<Vector<F>>,
}

impl<F: Field> HomologyBasis<F> {
    /// Computes the basis of `H_k(c)`.
    pub fn new(f: &F, c: &SimplicialComplex, k: usize) -> Self {
        let rows_k = c.simplices(k).len();
        let dense = |cols: Vec<Vec<(usize, F::E)>>, rows: usize| -> Vec<Vector<F>> {
            cols.into_iter()
                .map(|col| {
                    let mut v = vec![f.zero(); rows];
                    for (r, x) in col {
                        v[r] = x;
                    }
                    v
                })
                .collect()
        };
        let dk = dense(sparse_boundary(f, c, k), if k == 0 { 0 } else { c.simplices(k - 1).len() });
        let cycles = if k == 0 {
            (0..rows_k)
                .map(|i| {
                    let mut v = vec![f.zero(); rows_k];
                    v[i] = f.one();
                    v
                })
                .collect()
        } else {
            kernel(f, c.simplices(k - 1).len(), &dk)
        };
        let boundaries = dense(sparse_boundary(f, c, k + 1), rows_k);
        let mut basis = EchelonBasis::new(f.clone(), rows_k);
        for b in &boundaries {
            basis.insert(b);
        }
        let boundary_rank = basis.rank();
        let mut reps = Vec::new();
        for z in cycles {
            if basis.insert(&z) {
                reps.push(z);
            }
        }
        Self { basis, boundary_rank, reps }
    }

    /// Dimension of `H_k`.
    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    /// Homology coordinates of a cycle.
    pub fn coordinates(&self, cycle: &[F::E]) -> Option<Vector<F>> {
        self.basis.coordinates(cycle).map(|c| c[self.boundary_rank..].to_vec())
    }
}

/// Matrix (as columns) of the map `H_k(sub) → H_k(sup)` induced by inclusion.
pub fn induced_matrix<F: Field>(
    f: &F,
    sub: &SimplicialComplex,
    sup: &SimplicialComplex,
    k: usize,
) -> Result<Vec<Vector<F>>> {
    if !sub.is_subcomplex_of(sup) {
        return Err(Error::Structural("induced map requires an inclusion of complexes".into()));
    }
    let src = HomologyBasis::new(f, sub, k);
    let dst = HomologyBasis::new(f, sup, k);
    let index = sup.index(k);
    let sub_simplices = sub.simplices(k);
    src.reps
        .iter()
        .map(|z| {
            let mut v = vec![f.zero(); sup.simplices(k).len()];
            for (i, x) in z.iter().enumerate() {
                v[index[sub_simplices[i].as_slice()]] = x.clone();
            }
            dst.coordinates(&v)
                .ok_or_else(|| Error::Internal("image of a cycle is not a cycle".into()))
        })
        .collect()
}

/// Rank of the map `H_k(sub) → H_k(sup)` induced by inclusion.
pub fn induced_rank(sub: &SimplicialComplex, sup: &SimplicialComplex, k: usize, field: FieldTag) -> Result<usize> {
    with_field!(field, f => {
        let cols = induced_matrix(&f, sub, sup, k)?;
        let rows = cols.first().map_or(0, Vec::len);
        Ok(crate::linalg::rank(&f, rows, &cols))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::Graph;
    use crate::complex::clique_complex;
    use crate::fixtures;
    use crate::number::{frac, int};

    fn hollow_triangle() -> SimplicialComplex {
        SimplicialComplex::from_simplices(3, &[vec![0, 1], vec![1, 2], vec![0, 2]], 1).unwrap()
    }

    #[test]
    fn spheres() {
        assert_eq!(homology_ranks(&hollow_triangle(), FieldTag::Q), vec![1, 1]);
        let faces: Vec<Vec<usize>> =
            (0..5).map(|skip| (0..5).filter(|&v| v != skip).collect()).collect();
        let s3 = SimplicialComplex::from_simplices(5, &faces, 3).unwrap();
        assert_eq!(homology_ranks(&s3, FieldTag::Q), vec![1, 0, 0, 1]);
        assert_eq!(homology_ranks(&s3, FieldTag::F2), vec![1, 0, 0, 1]);
    }

    #[test]
    fn circulant_c62_is_a_two_sphere() {
        let c = clique_complex(&Graph::circulant(6, 2), 2);
        assert_eq!(homology_ranks(&c, FieldTag::Q), vec![1, 0, 1]);
        assert_eq!(homology_ranks(&clique_complex(&Graph::empty(3), 1), FieldTag::Q), vec![3, 0]);
    }

    #[test]
    fn seven_point_between_twelve_and_thirteen() {
        let b = vr_betti(&fixtures::seven_point(), &frac(25, 2), 3, FieldTag::Q);
        assert_eq!(b, vec![1, 2, 0, 0]);
    }

    #[test]
    fn induced_maps() {
        let t = hollow_triangle();
        let cols = induced_matrix(&crate::field::RationalField, &t, &t, 1).unwrap();
        assert_eq!(cols, vec![vec![int(1)]]);
        let filled = SimplicialComplex::from_simplices(3, &[vec![0, 1, 2]], 1).unwrap();
        assert_eq!(induced_rank(&t, &filled, 1, FieldTag::Q).unwrap(), 0);
        let two_points = SimplicialComplex::from_simplices(2, &[vec![0], vec![1]], 1).unwrap();
        let edge = SimplicialComplex::from_simplices(2, &[vec![0, 1]], 1).unwrap();
        assert_eq!(induced_rank(&two_points, &edge, 0, FieldTag::Q).unwrap(), 1);
        assert!(induced_rank(&edge, &two_points, 0, FieldTag::Q).is_err());
    }
}
