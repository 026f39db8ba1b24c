//! Dense linear algebra over a [`Field`]: incremental column echelon bases, kernels,
//! ranks and coordinates.

use crate::field::Field;

/// A dense vector of field elements.
pub type Vector<F> = Vec<<F as Field>::E>;

/// A span built one vector at a time. Every inserted vector is kept together with its
/// reduced form, so membership tests also return coordinates in the inserted vectors.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F: Field> {
    field: F,
    dim: usize,
    /// Reduced vectors with their pivot row (first nonzero entry, normalised to one).
    rows: Vec<(usize, Vector<F>, Vector<F>)>,
    inserted: usize,
}

impl<F: Field> EchelonBasis<F> {
    /// An empty basis of vectors of length `dim`.
    pub fn new(field: F, dim: usize) -> Self {
        Self { field, dim, rows: Vec::new(), inserted: 0 }
    }

    /// Number of independent vectors inserted so far.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis. Returns the residual and the combination `c` of
    /// inserted vectors with `v = residual + Σ c_i inserted_i`.
    pub fn reduce(&self, v: &[F::E]) -> (Vector<F>, Vector<F>) {
        let f = &self.field;
        let mut residual = v.to_vec();
        let mut combo = vec![f.zero(); self.inserted];
        for (pivot, vec, comb) in &self.rows {
            let coeff = residual[*pivot].clone();
            if f.is_zero(&coeff) {
                continue;
            }
            for (r, x) in residual.iter_mut().zip(vec) {
                if !f.is_zero(x) {
                    *r = f.sub(r, &f.mul(&coeff, x));
                }
            }
            for (c, x) in combo.iter_mut().zip(comb) {
                if !f.is_zero(x) {
                    *c = f.add(c, &f.mul(&coeff, x));
                }
            }
        }
        (residual, combo)
    }

    /// Inserts `v`. Returns false (and stores nothing) when `v` is already in the span.
    pub fn insert(&mut self, v: &[F::E]) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let f = self.field.clone();
        let (mut residual, combo) = self.reduce(v);
        let Some(pivot) = residual.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let scale = f.inv(&residual[pivot]);
        for x in residual.iter_mut() {
            *x = f.mul(x, &scale);
        }
        // residual = v - Σ combo_i inserted_i, expressed in the extended index set.
        let mut comb: Vector<F> = combo.iter().map(|c| f.neg(&f.mul(c, &scale))).collect();
        comb.push(scale);
        for (_, _, c) in self.rows.iter_mut() {
            c.push(f.zero());
        }
        for (_, vec, c) in self.rows.iter_mut() {
            let coeff = vec[pivot].clone();
            if f.is_zero(&coeff) {
                continue;
            }
            for (x, y) in vec.iter_mut().zip(&residual) {
                *x = f.sub(x, &f.mul(&coeff, y));
            }
            for (x, y) in c.iter_mut().zip(&comb) {
                *x = f.sub(x, &f.mul(&coeff, y));
            }
        }
        self.rows.push((pivot, residual, comb));
        self.inserted += 1;
        true
    }

    /// Coordinates of `v` in the inserted vectors, or `None` when `v` is outside the span.
    pub fn coordinates(&self, v: &[F::E]) -> Option<Vector<F>> {
        let (residual, combo) = self.reduce(v);
        residual.iter().all(|x| self.field.is_zero(x)).then_some(combo)
    }
}

/// Rank of the matrix whose columns are `cols`.
pub fn rank<F: Field>(field: &F, dim: usize, cols: &[Vector<F>]) -> usize {
    let mut b = EchelonBasis::new(field.clone(), dim);
    for c in cols {
        b.insert(c);
    }
    b.rank()
}

/// A basis of the kernel of the matrix whose columns are `cols` (each of length `rows`).
/// Kernel vectors have length `cols.len()`.
pub fn kernel<F: Field>(field: &F, rows: usize, cols: &[Vector<F>]) -> Vec<Vector<F>> {
    let f = field;
    let mut basis = EchelonBasis::new(f.clone(), rows);
    let mut used: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        match basis.coordinates(c) {
            Some(coords) => {
                let mut k = vec![f.zero(); cols.len()];
                for (idx, x) in used.iter().zip(coords) {
                    k[*idx] = f.neg(&x);
                }
                k[j] = f.one();
                out.push(k);
            }
            None => {
                basis.insert(c);
                used.push(j);
            }
        }
    }
    out
}

/// Applies the matrix with columns `cols` to `x`.
pub fn apply<F: Field>(field: &F, rows: usize, cols: &[Vector<F>], x: &[F::E]) -> Vector<F> {
    let mut out = vec![field.zero(); rows];
    for (c, xi) in cols.iter().zip(x) {
        if field.is_zero(xi) {
            continue;
        }
        for (o, v) in out.iter_mut().zip(c) {
            if !field.is_zero(v) {
                *o = field.add(o, &field.mul(xi, v));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};
    use crate::number::int;

    #[test]
    fn rank_and_kernel_over_q() {
        let f = RationalField;
        let cols = vec![
            vec![int(1), int(2), int(3)],
            vec![int(2), int(4), int(6)],
            vec![int(0), int(1), int(1)],
        ];
        assert_eq!(rank(&f, 3, &cols), 2);
        let k = kernel(&f, 3, &cols);
        assert_eq!(k.len(), 1);
        assert!(apply(&f, 3, &cols, &k[0]).iter().all(|x| x == &int(0)));
    }

    #[test]
    fn coordinates_recover_combinations() {
        let f = PrimeField::new(5).unwrap();
        let mut b = EchelonBasis::new(f, 3);
        assert!(b.insert(&[1, 2, 0]));
        assert!(b.insert(&[0, 1, 1]));
        assert!(!b.insert(&[2, 0, 1]));
        let target = vec![3, 3, 2];
        let c = b.coordinates(&target).unwrap();
        let back = apply(&f, 3, &[vec![1, 2, 0], vec![0, 1, 1]], &c);
        assert_eq!(back, target);
        assert!(b.coordinates(&[0, 0, 1]).is_none());
    }
}
