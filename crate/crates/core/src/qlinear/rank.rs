use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
///
/// Rows may have different lengths; missing entries are zero.
pub fn integer_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    for row in &mut rows {
        row.resize(ncols, BigInt::zero());
    }
    let nrows = rows.len();
    let mut rank = 0;
    let mut prev_pivot = BigInt::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        let (done, rest) = rows.split_at_mut(rank + 1);
        let pivot_row = &done[rank];
        for row in rest {
            let factor = row[col].clone();
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                // Exact division: Sylvester's identity guarantees divisibility.
                *x = (&pivot * &*x - &factor * p) / &prev_pivot;
            }
        }
        prev_pivot = pivot;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn small_matrices() {
        assert_eq!(integer_rank(m(&[])), 0);
        assert_eq!(integer_rank(m(&[&[0, 0]])), 0);
        assert_eq!(integer_rank(m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(integer_rank(m(&[&[1, 2], &[3, 4]])), 2);
        assert_eq!(integer_rank(m(&[&[0, 1, 2], &[0, 2, 4], &[1, 0, 0]])), 2);
        assert_eq!(
            integer_rank(m(&[&[2, 4, 6], &[1, 3, 5], &[1, 1, 1], &[0, 0, 1]])),
            3
        );
    }
}
