//! Dense GF(2) bit vectors and matrices.
//!
//! Sized for desk-scale codes (hundreds of qubits), so everything is a dense
//! `u64`-word layout. All arithmetic is mod 2: `xor` is addition, `parity_and`
//! is the inner product.

const WORD_BITS: usize = 64;

/// Fixed-length bit vector over GF(2).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD_BITS)],
            len,
        }
    }

    pub fn from_ones(len: usize, ones: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn toggle(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product over GF(2): parity of the AND of the two vectors.
    pub fn parity_and(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in parity_and");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    /// Indices of the set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(move |(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD_BITS + b)
                }
            })
        })
    }
}

/// Dense binary matrix; rows are `BitVec`s of equal length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<BitVec>,
    cols: usize,
}

impl BitMatrix {
    pub fn from_row_supports(cols: usize, supports: &[Vec<usize>]) -> Self {
        let rows = supports
            .iter()
            .map(|sup| BitVec::from_ones(cols, sup))
            .collect();
        Self { rows, cols }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn col_weight(&self, c: usize) -> usize {
        self.rows.iter().filter(|row| row.get(c)).count()
    }

    /// Row indices of the set bits in column `c`, ascending.
    pub fn col_support(&self, c: usize) -> Vec<usize> {
        (0..self.rows.len()).filter(|&r| self.get(r, c)).collect()
    }

    /// Matrix-vector product over GF(2): bit r of the result is <row_r, v>.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let ones: Vec<usize> = (0..self.rows.len())
            .filter(|&r| self.rows[r].parity_and(v))
            .collect();
        BitVec::from_ones(self.rows.len(), &ones)
    }

    /// True iff `self * other^T == 0` over GF(2).
    pub fn orthogonal_rows(&self, other: &Self) -> bool {
        self.rows
            .iter()
            .all(|a| other.rows.iter().all(|b| !a.parity_and(b)))
    }

    /// Dense 0/1 text grid, one row per line.
    pub fn to_text_grid(&self) -> String {
        let mut out = String::with_capacity(self.rows.len() * (self.cols + 1));
        for row in &self.rows {
            for c in 0..self.cols {
                out.push(if row.get(c) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_toggle() {
        let mut v = BitVec::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.toggle(129);
        v.toggle(64);
        assert!(v.get(0));
        assert!(!v.get(64));
        assert!(v.get(129));
        assert_eq!(v.count_ones(), 2);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 129]);
    }

    #[test]
    fn parity_and_counts_overlap_mod_2() {
        let a = BitVec::from_ones(10, &[1, 3, 5]);
        let b = BitVec::from_ones(10, &[3, 5, 7]);
        assert!(!a.parity_and(&b)); // overlap {3,5}, even
        let c = BitVec::from_ones(10, &[5]);
        assert!(a.parity_and(&c));
    }

    #[test]
    fn mul_vec_matches_manual_parity() {
        let m = BitMatrix::from_row_supports(5, &[vec![0, 1], vec![1, 2, 3], vec![4]]);
        let v = BitVec::from_ones(5, &[1, 3, 4]);
        let s = m.mul_vec(&v);
        assert_eq!(s.iter_ones().collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn text_grid_round_trips_bits() {
        let m = BitMatrix::from_row_supports(3, &[vec![0, 2], vec![1]]);
        assert_eq!(m.to_text_grid(), "101\n010\n");
    }
}
