//! Finite-dimensional algebras over a field given by sparse structure constants.

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg::{self, Matrix};

/// `table[i][j]` lists the nonzero coordinates `(k, c)` of `b_i b_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    field: Field,
    table: Vec<Vec<Vec<(usize, Elem)>>>,
    unit: Vec<Elem>,
}

impl Algebra {
    pub fn new(field: &Field, table: Vec<Vec<Vec<(usize, Elem)>>>, unit: Vec<Elem>) -> Self {
        let n = table.len();
        assert!(table.iter().all(|r| r.len() == n));
        assert_eq!(unit.len(), n);
        Algebra { field: field.clone(), table, unit }
    }

    /// Build from dense products of basis elements.
    pub fn from_dense(field: &Field, products: &[Vec<Vec<Elem>>], unit: Vec<Elem>) -> Self {
        let table = products
            .iter()
            .map(|row| row.iter().map(|v| sparse(v)).collect())
            .collect();
        Self::new(field, table, unit)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.table.len()
    }

    pub fn unit(&self) -> &[Elem] {
        &self.unit
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Elem)] {
        &self.table[i][j]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Elem> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[i] = self.field.one();
        v
    }

    pub fn mul(&self, x: &[Elem], y: &[Elem]) -> Vec<Elem> {
        let mut out = vec![self.field.zero(); self.dim()];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a.clone() * b.clone();
                for (k, c) in &self.table[i][j] {
                    out[*k] += &(ab.clone() * c.clone());
                }
            }
        }
        out
    }

    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        let basis: Vec<Vec<Elem>> = (0..n).map(|i| self.basis_vector(i)).collect();
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul(&basis[i], &basis[j]);
                for k in 0..n {
                    if self.mul(&ij, &basis[k]) != self.mul(&basis[i], &self.mul(&basis[j], &basis[k])) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_unital(&self) -> bool {
        (0..self.dim()).all(|i| {
            let b = self.basis_vector(i);
            self.mul(&self.unit, &b) == b && self.mul(&b, &self.unit) == b
        })
    }

    /// Basis of the center: kernel of all commutator maps `x -> x b_j - b_j x`.
    pub fn center(&self) -> Vec<Vec<Elem>> {
        let basis: Vec<Vec<Elem>> = (0..self.dim()).map(|i| self.basis_vector(i)).collect();
        self.centralizer(&basis)
    }

    /// Elements commuting with every element of `gens`.
    pub fn centralizer(&self, gens: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
        let n = self.dim();
        let mut rows: Matrix = Vec::new();
        for bj in gens {
            // column i of the commutator map with b_j
            let cols: Vec<Vec<Elem>> = (0..n)
                .map(|i| {
                    let bi = self.basis_vector(i);
                    sub(&self.mul(&bi, bj), &self.mul(bj, &bi))
                })
                .collect();
            for k in 0..n {
                rows.push(cols.iter().map(|c| c[k].clone()).collect());
            }
        }
        linalg::kernel(&self.field, &rows, n)
    }

    /// Is the linear map sending `b_i` to `images[i]` an algebra isomorphism?
    pub fn is_isomorphism(&self, other: &Algebra, images: &[Vec<Elem>]) -> Result<bool> {
        let n = self.dim();
        if other.dim() != n || images.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: other.dim() });
        }
        if linalg::rank(&images.to_vec()) < n {
            return Ok(false);
        }
        let apply = |v: &[Elem]| -> Vec<Elem> {
            let mut out = vec![self.field.zero(); n];
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    for (o, x) in out.iter_mut().zip(&images[i]) {
                        *o += &(c.clone() * x.clone());
                    }
                }
            }
            out
        };
        for i in 0..n {
            for j in 0..n {
                let lhs = apply(&self.mul(&self.basis_vector(i), &self.basis_vector(j)));
                if lhs != other.mul(&images[i], &images[j]) {
                    return Ok(false);
                }
            }
        }
        Ok(apply(&self.unit) == other.unit)
    }

    /// Sparse structure constants as JSON triples `[i, j, k, c]`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut entries = Vec::new();
        for (i, row) in self.table.iter().enumerate() {
            for (j, prod) in row.iter().enumerate() {
                for (k, c) in prod {
                    entries.push(serde_json::json!([i, j, k, c.to_string()]));
                }
            }
        }
        serde_json::json!({
            "field": self.field.spec(),
            "dim": self.dim(),
            "unit": self.unit.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "structure_constants": entries,
        })
    }
}

pub(crate) fn sparse(v: &[Elem]) -> Vec<(usize, Elem)> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.clone()))
        .collect()
}

pub(crate) fn sub(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}
