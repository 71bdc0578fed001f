//! Tristochastic matrices: nonnegative integer p x p matrices whose rows,
//! columns, and all p broken diagonals `i -> (i + d) mod p` share one sum.
//!
//! They index the dephased three-row partial Butson matrices at a prime
//! modulus. The 2 x 2 matrices are the constant ones with even line sum
//! and the 3 x 3 ones are exactly the circulants `[[a,b,c],[b,c,a],[c,a,b]]`;
//! for larger p there is no known parametrization and enumeration falls
//! back to backtracking. Anti-diagonals are not constrained.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::census::{binomial, BigCount};
use crate::error::Error;

/// A p x p nonnegative integer matrix with equal row, column, and broken
/// diagonal sums, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TristochasticMatrix {
    p: usize,
    entries: Vec<u64>,
    line_sum: u64,
}

impl TristochasticMatrix {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn line_sum(&self) -> u64 {
        self.line_sum
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.p + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.entries.chunks(self.p)
    }
}

/// True iff all `3p` line sums (rows, columns, broken diagonals) coincide.
/// Errors on non-square input.
pub fn is_tristochastic(a: &[Vec<u64>]) -> Result<bool, Error> {
    let p = a.len();
    if p == 0 || a.iter().any(|r| r.len() != p) {
        return Err(Error::DimensionMismatch("matrix must be square".into()));
    }
    let s: u64 = a[0].iter().sum();
    for row in a {
        if row.iter().sum::<u64>() != s {
            return Ok(false);
        }
    }
    let cols_ok = (0..p).all(|j| (0..p).map(|i| a[i][j]).sum::<u64>() == s);
    let diags_ok = (0..p).all(|d| (0..p).map(|i| a[i][(i + d) % p]).sum::<u64>() == s);
    Ok(cols_ok && diags_ok)
}

/// Calls `f` once per tristochastic matrix of the given size and line sum,
/// with the row-major entries, in lexicographic order of the flattened
/// entries.
///
/// The 2 x 2 and 3 x 3 cases walk their closed parametrizations; larger
/// sizes backtrack row-major over the entries, with the last row and
/// column forced by the sums and the diagonal check applied on completion.
pub fn for_each_tristochastic<F: FnMut(&[u64])>(p: usize, line_sum: u64, mut f: F) {
    assert!(p >= 2, "need p >= 2");
    match p {
        2 => {
            // constant matrices only, so the line sum must be even
            if line_sum.is_multiple_of(2) {
                let a = line_sum / 2;
                f(&[a, a, a, a]);
            }
        }
        3 => {
            // circulants [[a,b,c],[b,c,a],[c,a,b]]; flattened lex order is
            // lex order on (a, b, c)
            let mut a = 0;
            while a <= line_sum {
                let mut b = 0;
                while a + b <= line_sum {
                    let c = line_sum - a - b;
                    f(&[a, b, c, b, c, a, c, a, b]);
                    b += 1;
                }
                a += 1;
            }
        }
        _ => backtrack_tristochastic(p, line_sum, &mut f),
    }
}

fn backtrack_tristochastic<F: FnMut(&[u64])>(p: usize, s: u64, f: &mut F) {
    let mut state = Backtrack {
        p,
        s,
        entries: vec![0u64; p * p],
        col_used: vec![0u64; p],
        diag_used: vec![0u64; p],
    };
    state.fill(0, 0, f);
}

struct Backtrack {
    p: usize,
    s: u64,
    entries: Vec<u64>,
    col_used: Vec<u64>,
    diag_used: Vec<u64>,
}

impl Backtrack {
    fn diag_of(&self, i: usize, j: usize) -> usize {
        (j + self.p - i) % self.p
    }

    /// Upper bound on what the rest of row `i` (columns `from..p`) can
    /// still absorb, capped by column and diagonal budgets.
    fn row_capacity(&self, i: usize, from: usize) -> u64 {
        let s = self.s;
        (from..self.p)
            .map(|j| (s - self.col_used[j]).min(s - self.diag_used[self.diag_of(i, j)]))
            .sum()
    }

    fn fill<F: FnMut(&[u64])>(&mut self, cell: usize, row_used: u64, f: &mut F) {
        let p = self.p;
        let s = self.s;
        let (i, j) = (cell / p, cell % p);
        if i == p {
            // rows, columns and diagonals were enforced during the fill
            f(&self.entries);
            return;
        }
        let d = self.diag_of(i, j);
        let last_row = i == p - 1;
        let last_col = j == p - 1;
        let cap = (s - row_used)
            .min(s - self.col_used[j])
            .min(s - self.diag_used[d]);
        let (lo, hi) = if last_row {
            // columns force the whole last row
            let v = s - self.col_used[j];
            if v > cap {
                return;
            }
            (v, v)
        } else if last_col {
            // the row sum forces the last column
            let v = s - row_used;
            if v > cap {
                return;
            }
            (v, v)
        } else {
            // the rest of the row must be able to absorb what this cell
            // leaves behind
            let tail = self.row_capacity(i, j + 1);
            let need = s - row_used;
            let lo = need.saturating_sub(tail);
            (lo, cap.min(need))
        };
        let mut v = lo;
        while v <= hi {
            self.entries[cell] = v;
            self.col_used[j] += v;
            self.diag_used[d] += v;
            let next_row_used = if last_col { 0 } else { row_used + v };
            // a finished row must hit the sum exactly, and cells of the
            // last row close their diagonals
            let row_ok = !last_col || row_used + v == s;
            let diag_ok = !last_row || self.diag_used[d] == s;
            if row_ok && diag_ok {
                self.fill(cell + 1, next_row_used, f);
            }
            self.col_used[j] -= v;
            self.diag_used[d] -= v;
            if v == hi {
                break;
            }
            v += 1;
        }
        self.entries[cell] = 0;
    }
}

/// All tristochastic matrices with the given line sum, in lexicographic
/// order of their flattened entries. The empty list is a valid answer
/// (for example p = 2 with an odd line sum).
pub fn enumerate_tristochastic(p: usize, line_sum: u64) -> Vec<TristochasticMatrix> {
    let mut out = Vec::new();
    for_each_tristochastic(p, line_sum, |entries| {
        out.push(TristochasticMatrix {
            p,
            entries: entries.to_vec(),
            line_sum,
        });
    });
    out
}

/// Cardinality of [`enumerate_tristochastic`] without materializing when a
/// closed form is known: a single matrix for p = 2 and even sums, the
/// composition count `C(line_sum + 2, 2)` for p = 3, and enumeration
/// otherwise.
pub fn count_tristochastic(p: usize, line_sum: u64) -> BigCount {
    match p {
        2 => {
            if line_sum.is_multiple_of(2) {
                BigUint::from(1u32)
            } else {
                BigUint::zero()
            }
        }
        3 => binomial(line_sum + 2, 2),
        _ => {
            let mut count = BigUint::zero();
            for_each_tristochastic(p, line_sum, |_| count += 1u32);
            count
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::Compositions;

    fn to_rows(m: &TristochasticMatrix) -> Vec<Vec<u64>> {
        m.rows().map(|r| r.to_vec()).collect()
    }

    /// Shifted permutation witness: 1 at (0,0) and at (i, p-i) for i >= 1,
    /// scaled by s.
    fn shifted_permutation(p: usize, s: u64) -> Vec<Vec<u64>> {
        let mut a = vec![vec![0u64; p]; p];
        for i in 0..p {
            a[i][(p - i) % p] = s;
        }
        a
    }

    #[test]
    fn is_tristochastic_examples() {
        let circ = vec![vec![1u64, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        assert!(is_tristochastic(&circ).unwrap());
        let id = vec![vec![1u64, 0], vec![0, 1]];
        assert!(!is_tristochastic(&id).unwrap());
        assert!(is_tristochastic(&shifted_permutation(5, 1)).unwrap());
        let ragged = vec![vec![1u64, 2], vec![3]];
        assert!(is_tristochastic(&ragged).is_err());
    }

    #[test]
    fn enumerate_small() {
        let p3s1 = enumerate_tristochastic(3, 1);
        assert_eq!(p3s1.len(), 3);
        for m in &p3s1 {
            assert!(is_tristochastic(&to_rows(m)).unwrap());
        }
        assert!(enumerate_tristochastic(2, 1).is_empty());
        let p2s2 = enumerate_tristochastic(2, 2);
        assert_eq!(p2s2.len(), 1);
        assert_eq!(p2s2[0].entries(), &[1, 1, 1, 1]);
    }

    #[test]
    fn enumerate_is_sorted_and_valid() {
        for (p, s) in [(2usize, 4u64), (3, 3), (4, 2), (5, 1), (5, 2)] {
            let ms = enumerate_tristochastic(p, s);
            for m in &ms {
                assert!(is_tristochastic(&to_rows(m)).unwrap(), "p={p} s={s}");
                assert_eq!(m.line_sum(), s);
            }
            for w in ms.windows(2) {
                assert!(w[0].entries() < w[1].entries(), "lex order p={p} s={s}");
            }
        }
    }

    /// Filter all row-composition combinations; independent of the pruned
    /// backtracking.
    fn enumerate_by_filter(p: usize, s: u64) -> Vec<Vec<u64>> {
        let mut rows = Vec::new();
        let mut comps = Compositions::new(s, p);
        while let Some(c) = comps.next_slice() {
            rows.push(c.to_vec());
        }
        let mut out = Vec::new();
        let mut pick = vec![0usize; p];
        'outer: loop {
            let mat: Vec<Vec<u64>> = pick.iter().map(|&i| rows[i].clone()).collect();
            if is_tristochastic(&mat).unwrap() {
                out.push(mat.concat());
            }
            let mut i = 0;
            loop {
                if i == p {
                    break 'outer;
                }
                pick[i] += 1;
                if pick[i] < rows.len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
        }
        out.sort();
        out
    }

    #[test]
    fn backtracking_matches_exhaustive_filter() {
        for (p, s) in [(2usize, 2u64), (3, 2), (3, 3), (4, 1), (4, 2), (5, 1)] {
            let fast: Vec<Vec<u64>> = enumerate_tristochastic(p, s)
                .iter()
                .map(|m| m.entries().to_vec())
                .collect();
            assert_eq!(fast, enumerate_by_filter(p, s), "p={p} s={s}");
        }
    }

    #[test]
    fn count_matches_enumeration() {
        for p in 2..=5usize {
            for s in 0..=6u64 {
                let n = enumerate_tristochastic(p, s).len();
                assert_eq!(count_tristochastic(p, s), BigUint::from(n), "p={p} s={s}");
            }
        }
    }

    #[test]
    fn count_closed_forms() {
        assert_eq!(count_tristochastic(3, 2), BigUint::from(6u32));
        assert_eq!(count_tristochastic(2, 3), BigUint::zero());
        // displacement-bijective permutations of Z_5
        assert_eq!(count_tristochastic(5, 1), BigUint::from(15u32));
    }

    #[test]
    fn p3_matrices_are_circulants() {
        for s in 0..=5u64 {
            for m in enumerate_tristochastic(3, s) {
                let e = m.entries();
                let (a, b, c) = (e[0], e[1], e[2]);
                assert_eq!(e, &[a, b, c, b, c, a, c, a, b]);
            }
        }
    }

    #[test]
    fn shifted_permutation_witness_for_odd_primes() {
        // the witness gives count >= 1 for every odd prime p and s >= 1
        for p in [3usize, 5, 7, 11] {
            for s in [1u64, 2, 5, 9] {
                assert!(is_tristochastic(&shifted_permutation(p, s)).unwrap());
            }
        }
        // enumeration agrees where it is desk-scale
        assert!(count_tristochastic(3, 9) >= BigUint::from(1u32));
        assert!(count_tristochastic(5, 2) >= BigUint::from(1u32));
        assert!(count_tristochastic(7, 1) >= BigUint::from(1u32));
    }

    #[test]
    fn closed_under_row_shift_and_transpose() {
        for (p, s) in [(3usize, 2u64), (4, 2), (5, 1)] {
            let set: std::collections::HashSet<Vec<u64>> = enumerate_tristochastic(p, s)
                .iter()
                .map(|m| m.entries().to_vec())
                .collect();
            for m in &set {
                // cyclic row shift
                let mut shifted = m[p * (p - 1)..].to_vec();
                shifted.extend_from_slice(&m[..p * (p - 1)]);
                assert!(set.contains(&shifted), "row shift p={p} s={s}");
                // transpose
                let mut t = vec![0u64; p * p];
                for i in 0..p {
                    for j in 0..p {
                        t[j * p + i] = m[i * p + j];
                    }
                }
                assert!(set.contains(&t), "transpose p={p} s={s}");
            }
        }
    }
}
