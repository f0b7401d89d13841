//! The four-table closeness statistic
//!
//! ```text
//! Z = (1/n) Σ_i ( |X_i - Y_i| + |X'_i - Y'_i| - |X_i - X'_i| - |Y_i - Y'_i| )
//! ```
//!
//! where `X, X'` count two independent batches of `n` samples from `p` and
//! `Y, Y'` two batches from `q`. Every summand is an integer, so the sum is
//! accumulated exactly and divided by `n` once.

use crate::distributions::SampleBatch;
use crate::error::{Error, Result};

/// Per-symbol occurrence counts of one batch; `counts[i]` is symbol `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    counts: Vec<u64>,
    n: u64,
}

impl CountTable {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        let n = counts.iter().sum();
        Self { counts, n }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.counts.len()
    }

    /// Count of the 1-based `symbol`.
    pub fn get(&self, symbol: usize) -> u64 {
        self.counts[symbol - 1]
    }
}

/// Counts the symbols of `batch` over `[k]`.
pub fn histogram(batch: &SampleBatch, k: usize) -> Result<CountTable> {
    let mut counts = vec![0u64; k];
    for (pos, &s) in batch.symbols().iter().enumerate() {
        if s == 0 || s > k {
            return Err(Error::Range(format!(
                "sample {} has symbol {s}, outside 1..={k}",
                pos + 1
            )));
        }
        counts[s - 1] += 1;
    }
    Ok(CountTable {
        counts,
        n: batch.len() as u64,
    })
}

/// Which of the four count tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Table {
    X,
    XPrime,
    Y,
    YPrime,
}

impl Table {
    pub const ALL: [Table; 4] = [Table::X, Table::XPrime, Table::Y, Table::YPrime];
}

/// `X, X'` from the samples of `p` and `Y, Y'` from the samples of `q`,
/// all over the same `[k]` with the same `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourWaySplit {
    pub x: CountTable,
    pub xprime: CountTable,
    pub y: CountTable,
    pub yprime: CountTable,
}

impl FourWaySplit {
    pub fn new(x: CountTable, xprime: CountTable, y: CountTable, yprime: CountTable) -> Result<Self> {
        let (n, k) = (x.n, x.k());
        for t in [&xprime, &y, &yprime] {
            if t.n != n || t.k() != k {
                return Err(Error::Dimension(format!(
                    "count tables disagree: (n={n}, k={k}) vs (n={}, k={})",
                    t.n,
                    t.k()
                )));
            }
        }
        Ok(Self { x, xprime, y, yprime })
    }

    pub fn n(&self) -> u64 {
        self.x.n
    }

    pub fn k(&self) -> usize {
        self.x.k()
    }

    pub fn table(&self, which: Table) -> &CountTable {
        match which {
            Table::X => &self.x,
            Table::XPrime => &self.xprime,
            Table::Y => &self.y,
            Table::YPrime => &self.yprime,
        }
    }

    fn table_mut(&mut self, which: Table) -> &mut CountTable {
        match which {
            Table::X => &mut self.x,
            Table::XPrime => &mut self.xprime,
            Table::Y => &mut self.y,
            Table::YPrime => &mut self.yprime,
        }
    }

    /// Integer numerator `n * Z`.
    pub fn z_numerator(&self) -> i64 {
        let mut total = 0i64;
        for i in 0..self.k() {
            let x = self.x.counts[i] as i64;
            let xp = self.xprime.counts[i] as i64;
            let y = self.y.counts[i] as i64;
            let yp = self.yprime.counts[i] as i64;
            total += (x - y).abs() + (xp - yp).abs() - (x - xp).abs() - (y - yp).abs();
        }
        total
    }
}

/// First `n` samples of each batch go to `X` (resp. `Y`), the last `n` to
/// `X'` (resp. `Y'`).
pub fn split_samples(from_p: &SampleBatch, from_q: &SampleBatch) -> Result<FourWaySplit> {
    if !from_p.len().is_multiple_of(2) || !from_q.len().is_multiple_of(2) {
        return Err(Error::Dimension(format!(
            "sample batches must have even length, got {} and {}",
            from_p.len(),
            from_q.len()
        )));
    }
    if from_p.len() != from_q.len() {
        return Err(Error::Dimension(format!(
            "sample batches must have equal length, got {} and {}",
            from_p.len(),
            from_q.len()
        )));
    }
    if from_p.k() != from_q.k() {
        return Err(Error::Dimension(format!(
            "sample batches over {} and {} symbols",
            from_p.k(),
            from_q.k()
        )));
    }
    let k = from_p.k();
    let half = from_p.len() / 2;
    let count = |symbols: &[usize]| {
        let mut counts = vec![0u64; k];
        for &s in symbols {
            counts[s - 1] += 1;
        }
        CountTable {
            counts,
            n: symbols.len() as u64,
        }
    };
    let (p1, p2) = from_p.symbols().split_at(half);
    let (q1, q2) = from_q.symbols().split_at(half);
    Ok(FourWaySplit {
        x: count(p1),
        xprime: count(p2),
        y: count(q1),
        yprime: count(q2),
    })
}

/// The renormalized statistic `Z`.
pub fn compute_z(split: &FourWaySplit) -> Result<f64> {
    let n = split.n();
    if n == 0 {
        return Err(Error::Degenerate("Z is undefined for n = 0".into()));
    }
    Ok(split.z_numerator() as f64 / n as f64)
}

/// Largest change of `n·Z` caused by moving a single sample.
///
/// A move touches two symbols of one table, and within a symbol's summand
/// that table's count appears in two absolute values, so the numerator moves
/// by at most `2 · 2`.
pub const MAX_SAMPLE_INFLUENCE: f64 = 4.0;

/// `|Z' - Z|` after one sample of table `which` moves from `from_symbol` to
/// `to_symbol`.
///
/// Samples with the same symbol are interchangeable for `Z`, so a single
/// sample is addressed by the symbol it currently holds.
pub fn bounded_difference_audit(
    split: &FourWaySplit,
    which: Table,
    from_symbol: usize,
    to_symbol: usize,
) -> Result<f64> {
    let k = split.k();
    for s in [from_symbol, to_symbol] {
        if s == 0 || s > k {
            return Err(Error::Range(format!("symbol {s} outside 1..={k}")));
        }
    }
    if split.table(which).get(from_symbol) == 0 {
        return Err(Error::Range(format!(
            "table {which:?} holds no sample with symbol {from_symbol}"
        )));
    }
    let before = compute_z(split)?;
    let mut moved = split.clone();
    let table = moved.table_mut(which);
    table.counts[from_symbol - 1] -= 1;
    table.counts[to_symbol - 1] += 1;
    Ok((compute_z(&moved)? - before).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(c: &[u64]) -> CountTable {
        CountTable::from_counts(c.to_vec())
    }

    fn split(x: &[u64], xp: &[u64], y: &[u64], yp: &[u64]) -> FourWaySplit {
        FourWaySplit::new(table(x), table(xp), table(y), table(yp)).unwrap()
    }

    #[test]
    fn histogram_examples() {
        let empty = histogram(&SampleBatch::empty(3), 3).unwrap();
        assert_eq!(empty.counts(), &[0, 0, 0]);
        let b = SampleBatch::new(vec![1, 1, 2], 2).unwrap();
        assert_eq!(histogram(&b, 2).unwrap().counts(), &[2, 1]);
        let b = SampleBatch::new(vec![3, 3, 3, 1], 3).unwrap();
        let h = histogram(&b, 3).unwrap();
        assert_eq!(h.counts(), &[1, 0, 3]);
        assert_eq!(h.n(), 4);
    }

    #[test]
    fn histogram_rejects_out_of_range() {
        let b = SampleBatch::new(vec![1, 3], 3).unwrap();
        assert!(matches!(histogram(&b, 2), Err(Error::Range(_))));
    }

    #[test]
    fn split_examples() {
        let p = SampleBatch::new(vec![1, 2, 1, 1], 2).unwrap();
        let s = split_samples(&p, &p).unwrap();
        assert_eq!(s.x.counts(), &[1, 1]);
        assert_eq!(s.xprime.counts(), &[2, 0]);
        assert_eq!(s.n(), 2);
        assert_eq!(split_samples(&p, &p).unwrap(), s);

        let e = split_samples(&SampleBatch::empty(2), &SampleBatch::empty(2)).unwrap();
        assert_eq!(e.n(), 0);
        for t in Table::ALL {
            assert_eq!(e.table(t).counts(), &[0, 0]);
        }
    }

    #[test]
    fn split_rejects_odd_or_unequal() {
        let odd = SampleBatch::new(vec![1, 2, 1], 2).unwrap();
        let even = SampleBatch::new(vec![1, 2], 2).unwrap();
        assert!(matches!(split_samples(&odd, &odd), Err(Error::Dimension(_))));
        assert!(matches!(
            split_samples(&even, &SampleBatch::new(vec![1, 1, 1, 1], 2).unwrap()),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn z_examples() {
        let same = split(&[3, 1], &[3, 1], &[3, 1], &[3, 1]);
        assert_eq!(compute_z(&same).unwrap(), 0.0);
        // k = 1 with n = 10: the tables list only the counts of symbol 1
        let k1 = FourWaySplit {
            x: CountTable { counts: vec![3], n: 10 },
            xprime: CountTable { counts: vec![4], n: 10 },
            y: CountTable { counts: vec![5], n: 10 },
            yprime: CountTable { counts: vec![4], n: 10 },
        };
        assert_eq!(compute_z(&k1).unwrap(), 0.0);
        let k2 = split(&[2, 0], &[1, 1], &[0, 2], &[0, 2]);
        assert_eq!(compute_z(&k2).unwrap(), 2.0);
    }

    #[test]
    fn z_rejects_n_zero() {
        let e = split(&[0, 0], &[0, 0], &[0, 0], &[0, 0]);
        assert!(matches!(compute_z(&e), Err(Error::Degenerate(_))));
    }

    #[test]
    fn audit_examples() {
        let s = split(&[1, 0], &[1, 0], &[1, 0], &[1, 0]);
        assert_eq!(bounded_difference_audit(&s, Table::X, 1, 1).unwrap(), 0.0);
        assert_eq!(bounded_difference_audit(&s, Table::X, 1, 2).unwrap(), 0.0);
    }

    #[test]
    fn one_move_can_shift_z_by_four_over_n() {
        // Y_1 moves toward X_1 and away from Y'_1 at the same time
        let s = split(&[2, 0], &[1, 1], &[0, 2], &[0, 2]);
        assert_eq!(compute_z(&s).unwrap(), 2.0);
        let d = bounded_difference_audit(&s, Table::Y, 2, 1).unwrap();
        assert_eq!(d, 4.0 / 2.0);
        assert!(d <= MAX_SAMPLE_INFLUENCE / 2.0);
    }

    #[test]
    fn audit_rejects_bad_moves() {
        let s = split(&[1, 0], &[1, 0], &[1, 0], &[1, 0]);
        assert!(matches!(
            bounded_difference_audit(&s, Table::X, 2, 1),
            Err(Error::Range(_))
        ));
        assert!(matches!(
            bounded_difference_audit(&s, Table::X, 1, 3),
            Err(Error::Range(_))
        ));
    }
}
