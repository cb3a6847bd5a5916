//! Matrices of polynomials: symbolic determinants and principal-minor sums.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fastmul;
use crate::poly::Polynomial;
use crate::ring::RingSpec;

/// Row-major matrix of polynomials sharing `nvars` and ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Polynomial>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ArityMismatch { expected: 1, found: 0 });
        }
        if entries.len() != rows * cols {
            return Err(Error::ArityMismatch { expected: rows * cols, found: entries.len() });
        }
        let (nvars, ring) = (entries[0].nvars(), entries[0].ring().clone());
        for e in &entries {
            if e.ring() != &ring {
                return Err(Error::RingMismatch);
            }
            if e.nvars() != nvars {
                return Err(Error::ArityMismatch { expected: nvars, found: e.nvars() });
            }
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn nvars(&self) -> usize {
        self.entries[0].nvars()
    }

    pub fn ring(&self) -> &RingSpec {
        self.entries[0].ring()
    }

    /// The submatrix on the given rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<PolyMatrix> {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                if i >= self.rows || j >= self.cols {
                    return Err(Error::IndexOutOfRange { index: i.max(j), nvars: self.rows.min(self.cols) });
                }
                entries.push(self.get(i, j).clone());
            }
        }
        PolyMatrix::new(rows.len(), cols.len(), entries)
    }

    fn check_square(&self) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(())
    }

    /// Exact determinant by cofactor expansion, always along the row with
    /// the fewest stored terms. Division-free, so valid over any ring.
    pub fn determinant(&self) -> Result<Polynomial> {
        self.check_square()?;
        let idx: Vec<usize> = (0..self.rows).collect();
        self.det_on(&idx, &idx)
    }

    /// Determinant of the principal submatrix on `indices`.
    pub fn principal_minor(&self, indices: &[usize]) -> Result<Polynomial> {
        self.check_square()?;
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.rows) {
            return Err(Error::IndexOutOfRange { index: bad, nvars: self.rows });
        }
        if indices.is_empty() {
            return Ok(Polynomial::one(self.nvars(), self.ring()));
        }
        self.det_on(indices, indices)
    }

    /// Laplace expansion with every minor computed once, in machine
    /// integers when the entries fit and exactly otherwise.
    fn det_on(&self, rows: &[usize], cols: &[usize]) -> Result<Polynomial> {
        self.det_with(rows, cols, true)
    }

    /// Rows are taken sparsest first; `minors[mask]` is the determinant of
    /// the last `popcount(mask)` rows on the columns selected by `mask`.
    fn det_with(&self, rows: &[usize], cols: &[usize], allow_fast: bool) -> Result<Polynomial> {
        debug_assert_eq!(rows.len(), cols.len());
        let (nvars, ring) = (self.nvars(), self.ring());
        let k = rows.len();
        if k == 1 {
            return Ok(self.get(rows[0], cols[0]).clone());
        }
        let weight = |r: usize| cols.iter().map(|&c| self.get(r, c).num_terms()).sum::<usize>();
        let mut order = rows.to_vec();
        order.sort_by_key(|&r| weight(r));
        // Reordering rows permutes the matrix; the sign is undone at the end.
        let odd = permutation_is_odd(rows, &order);

        if allow_fast {
            let iters: Vec<Vec<_>> =
                order.iter().map(|&r| cols.iter().map(|&c| self.get(r, c).term_map().iter()).collect()).collect();
            let degrees: Vec<u32> = order
                .iter()
                .map(|&r| cols.iter().map(|&c| self.get(r, c).total_degree().or_zero()).max().unwrap_or(0))
                .collect();
            if let Some(terms) = fastmul::determinant(ring, nvars, &iters, &degrees) {
                let det = Polynomial::from_sorted(nvars, ring, terms);
                return Ok(if odd { det.neg() } else { det });
            }
        }

        let full = (1usize << k) - 1;
        let mut minors: Vec<Option<Polynomial>> = vec![None; full + 1];
        minors[0] = Some(Polynomial::one(nvars, ring));
        let mut by_size: Vec<Vec<usize>> = vec![Vec::new(); k + 1];
        for mask in 1..=full {
            by_size[mask.count_ones() as usize].push(mask);
        }
        for size in 1..=k {
            let row = order[k - size];
            for &mask in &by_size[size] {
                let mut acc = Polynomial::zero(nvars, ring);
                let mut position = 0;
                for (bit, &c) in cols.iter().enumerate() {
                    if mask & (1 << bit) == 0 {
                        continue;
                    }
                    let entry = self.get(row, c);
                    let rest = minors[mask & !(1 << bit)].as_ref().expect("smaller minors first");
                    if !entry.is_zero() && !rest.is_zero() {
                        let term = entry.mul(rest)?;
                        acc = if position % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
                    }
                    position += 1;
                }
                minors[mask] = Some(acc);
            }
            // Minors two sizes down are no longer needed.
            if size >= 2 {
                for &mask in &by_size[size - 2] {
                    minors[mask] = None;
                }
            }
        }
        let det = minors[full].take().expect("full minor");
        Ok(if odd { det.neg() } else { det })
    }

    /// `E_1, ..., E_n`: `E_k` is the sum of all `k x k` principal minors.
    /// `E_1` is the trace and `E_n` the determinant.
    pub fn principal_minor_sums(&self) -> Result<Vec<Polynomial>> {
        self.check_square()?;
        let n = self.rows;
        let mut sums: Vec<Polynomial> = (0..n).map(|_| Polynomial::zero(self.nvars(), self.ring())).collect();
        for mask in 1u32..(1u32 << n) {
            let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            let minor = self.det_on(&idx, &idx)?;
            let k = idx.len() - 1;
            sums[k] = sums[k].add(&minor)?;
        }
        Ok(sums)
    }
}

/// Parity of the permutation taking `from` to `to` (same elements).
fn permutation_is_odd(from: &[usize], to: &[usize]) -> bool {
    let mut perm: Vec<usize> = to.iter().map(|t| from.iter().position(|f| f == t).expect("same elements")).collect();
    let mut odd = false;
    for i in 0..perm.len() {
        while perm[i] != i {
            let j = perm[i];
            perm.swap(i, j);
            odd = !odd;
        }
    }
    odd
}
