//! Graphlike CSS codes and the unrotated surface code constructor.
//!
//! A code is *graphlike* when every column of each parity-check matrix has
//! Hamming weight 1 or 2, so each single-qubit error of a given Pauli type
//! triggers at most two checks and decoding reduces to matching. Weight-1
//! columns identify boundary qubits.
//!
//! # Index layout (stable contract)
//!
//! The surface code of odd distance `d` lives on a `(2d-1) x (2d-1)`
//! interleaved lattice with sites `(r, c)`:
//!
//! * data qubits at `(even, even)` and `(odd, odd)` sites,
//! * X checks at `(even, odd)` sites (`d` rows of `d-1`),
//! * Z checks at `(odd, even)` sites (`d-1` rows of `d`).
//!
//! Qubits and checks are numbered row-major over this lattice (`r` outer,
//! `c` inner), independently per kind. Metric tables and representative
//! error paths downstream depend on this ordering, so it is part of the
//! public interface and must not change.
//!
//! X checks detect Z errors (`h_x` is the parity-check matrix for Z-type
//! error patterns) and Z checks detect X errors. The Z logical is a
//! left-to-right string on the top data row; the X logical a top-to-bottom
//! string on the leftmost data column.

use serde::{Deserialize, Serialize};

use crate::bits::{BitMatrix, BitVec};
use crate::error::{Error, Result};

/// Pauli type of the error pattern being decoded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Z,
}

impl Pauli {
    pub fn opposite(self) -> Self {
        match self {
            Pauli::X => Pauli::Z,
            Pauli::Z => Pauli::X,
        }
    }
}

impl std::fmt::Display for Pauli {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Pauli::X => write!(f, "X"),
            Pauli::Z => write!(f, "Z"),
        }
    }
}

/// Binary error pattern over the data qubits, one Pauli type at a time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorPattern {
    bits: BitVec,
}

impl ErrorPattern {
    pub fn zeros(n_qubits: usize) -> Self {
        Self {
            bits: BitVec::zeros(n_qubits),
        }
    }

    pub fn from_flipped(n_qubits: usize, flipped: &[usize]) -> Self {
        Self {
            bits: BitVec::from_ones(n_qubits, flipped),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.len() == 0
    }

    pub fn get(&self, qubit: usize) -> bool {
        self.bits.get(qubit)
    }

    pub fn toggle(&mut self, qubit: usize) {
        self.bits.toggle(qubit);
    }

    pub fn xor(&self, other: &Self) -> Self {
        Self {
            bits: self.bits.xor(&other.bits),
        }
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn flipped_qubits(&self) -> Vec<usize> {
        self.bits.iter_ones().collect()
    }

    pub fn as_bits(&self) -> &BitVec {
        &self.bits
    }
}

/// Measured syndrome: one bit per check of the relevant type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syndrome {
    bits: BitVec,
    unsatisfied: Vec<usize>,
}

impl Syndrome {
    pub fn from_bits(bits: BitVec) -> Self {
        let unsatisfied = bits.iter_ones().collect();
        Self { bits, unsatisfied }
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    /// Sorted indices of the unsatisfied checks.
    pub fn unsatisfied(&self) -> &[usize] {
        &self.unsatisfied
    }

    /// Number of unsatisfied checks, `s` in the decoding graph.
    pub fn weight(&self) -> usize {
        self.unsatisfied.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.unsatisfied.is_empty()
    }
}

/// Parity checks, logicals and geometry of a graphlike CSS code.
#[derive(Debug, Clone)]
pub struct CodeSpec {
    distance: usize,
    n_qubits: usize,
    h_x: BitMatrix,
    h_z: BitMatrix,
    logical_x: Vec<BitVec>,
    logical_z: Vec<BitVec>,
    check_coords_x: Vec<(usize, usize)>,
    check_coords_z: Vec<(usize, usize)>,
    boundary_checks_x: Vec<bool>,
    boundary_checks_z: Vec<bool>,
}

impl CodeSpec {
    /// Assemble and validate a graphlike CSS code from its matrices and
    /// logicals. Boundary flags are derived from weight-1 columns.
    pub fn from_parts(
        distance: usize,
        h_x: BitMatrix,
        h_z: BitMatrix,
        logical_x: Vec<BitVec>,
        logical_z: Vec<BitVec>,
        check_coords_x: Vec<(usize, usize)>,
        check_coords_z: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let n_qubits = h_x.n_cols();
        if h_z.n_cols() != n_qubits {
            return Err(Error::param("h_x and h_z column counts differ"));
        }
        if check_coords_x.len() != h_x.n_rows() || check_coords_z.len() != h_z.n_rows() {
            return Err(Error::param("check coordinate count does not match rows"));
        }
        if !h_x.orthogonal_rows(&h_z) {
            return Err(Error::param("CSS commutation violated: h_x * h_z^T != 0"));
        }
        for (name, h) in [("h_x", &h_x), ("h_z", &h_z)] {
            for c in 0..n_qubits {
                let w = h.col_weight(c);
                if w == 0 || w > 2 {
                    return Err(Error::param(format!(
                        "{name} column {c} has weight {w}; graphlike codes need 1 or 2"
                    )));
                }
            }
        }
        if logical_x.len() != logical_z.len() {
            return Err(Error::param("logical_x and logical_z counts differ"));
        }
        for (k, lx) in logical_x.iter().enumerate() {
            // X-type logicals must commute with every Z check.
            if (0..h_z.n_rows()).any(|r| h_z.row(r).parity_and(lx)) {
                return Err(Error::param(format!("logical_x[{k}] anticommutes with h_z")));
            }
        }
        for (k, lz) in logical_z.iter().enumerate() {
            if (0..h_x.n_rows()).any(|r| h_x.row(r).parity_and(lz)) {
                return Err(Error::param(format!("logical_z[{k}] anticommutes with h_x")));
            }
        }
        for (k, (lx, lz)) in logical_x.iter().zip(&logical_z).enumerate() {
            if !lx.parity_and(lz) {
                return Err(Error::param(format!(
                    "logical pair {k} does not anticommute"
                )));
            }
        }
        let boundary_checks_x = derive_boundary_flags(&h_x);
        let boundary_checks_z = derive_boundary_flags(&h_z);
        Ok(Self {
            distance,
            n_qubits,
            h_x,
            h_z,
            logical_x,
            logical_z,
            check_coords_x,
            check_coords_z,
            boundary_checks_x,
            boundary_checks_z,
        })
    }

    pub fn distance(&self) -> usize {
        self.distance
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn h_x(&self) -> &BitMatrix {
        &self.h_x
    }

    pub fn h_z(&self) -> &BitMatrix {
        &self.h_z
    }

    /// Parity-check matrix that detects errors of type `pauli`.
    pub fn checks_for(&self, pauli: Pauli) -> &BitMatrix {
        match pauli {
            Pauli::Z => &self.h_x,
            Pauli::X => &self.h_z,
        }
    }

    /// Logicals that anticommute with residual errors of type `pauli`.
    pub fn logicals_against(&self, pauli: Pauli) -> &[BitVec] {
        match pauli {
            Pauli::Z => &self.logical_x,
            Pauli::X => &self.logical_z,
        }
    }

    pub fn check_coords(&self, pauli: Pauli) -> &[(usize, usize)] {
        match pauli {
            Pauli::Z => &self.check_coords_x,
            Pauli::X => &self.check_coords_z,
        }
    }

    /// Per-check flag: reachable from the lattice boundary by one flip.
    pub fn boundary_checks(&self, pauli: Pauli) -> &[bool] {
        match pauli {
            Pauli::Z => &self.boundary_checks_x,
            Pauli::X => &self.boundary_checks_z,
        }
    }
}

fn derive_boundary_flags(h: &BitMatrix) -> Vec<bool> {
    let mut flags = vec![false; h.n_rows()];
    for c in 0..h.n_cols() {
        let sup = h.col_support(c);
        if sup.len() == 1 {
            flags[sup[0]] = true;
        }
    }
    flags
}

/// Build the unrotated surface code of odd distance `d >= 3`.
pub fn build_surface_code(d: usize) -> Result<CodeSpec> {
    if d < 3 || d % 2 == 0 {
        return Err(Error::param(format!(
            "distance must be an odd integer >= 3, got {d}"
        )));
    }
    let side = 2 * d - 1;
    let is_data = |r: usize, c: usize| (r % 2 == 0 && c % 2 == 0) || (r % 2 == 1 && c % 2 == 1);

    // Row-major qubit ids over data sites.
    let mut qubit_id = vec![vec![usize::MAX; side]; side];
    let mut n_qubits = 0;
    for r in 0..side {
        for c in 0..side {
            if is_data(r, c) {
                qubit_id[r][c] = n_qubits;
                n_qubits += 1;
            }
        }
    }
    debug_assert_eq!(n_qubits, d * d + (d - 1) * (d - 1));

    let neighbors = |r: usize, c: usize| {
        let mut out = Vec::with_capacity(4);
        if r > 0 {
            out.push((r - 1, c));
        }
        if r + 1 < side {
            out.push((r + 1, c));
        }
        if c > 0 {
            out.push((r, c - 1));
        }
        if c + 1 < side {
            out.push((r, c + 1));
        }
        out
    };

    let mut x_supports = Vec::new();
    let mut z_supports = Vec::new();
    let mut coords_x = Vec::new();
    let mut coords_z = Vec::new();
    for r in 0..side {
        for c in 0..side {
            if r % 2 == 0 && c % 2 == 1 {
                let sup: Vec<usize> = neighbors(r, c).iter().map(|&(a, b)| qubit_id[a][b]).collect();
                x_supports.push(sup);
                coords_x.push((r, c));
            } else if r % 2 == 1 && c % 2 == 0 {
                let sup: Vec<usize> = neighbors(r, c).iter().map(|&(a, b)| qubit_id[a][b]).collect();
                z_supports.push(sup);
                coords_z.push((r, c));
            }
        }
    }
    debug_assert_eq!(x_supports.len(), d * (d - 1));
    debug_assert_eq!(z_supports.len(), d * (d - 1));

    let h_x = BitMatrix::from_row_supports(n_qubits, &x_supports);
    let h_z = BitMatrix::from_row_supports(n_qubits, &z_supports);

    // Z logical: top data row, left to right. X logical: leftmost data column.
    let logical_z_sup: Vec<usize> = (0..side).step_by(2).map(|c| qubit_id[0][c]).collect();
    let logical_x_sup: Vec<usize> = (0..side).step_by(2).map(|r| qubit_id[r][0]).collect();
    let logical_z = vec![BitVec::from_ones(n_qubits, &logical_z_sup)];
    let logical_x = vec![BitVec::from_ones(n_qubits, &logical_x_sup)];

    CodeSpec::from_parts(d, h_x, h_z, logical_x, logical_z, coords_x, coords_z)
}

/// Syndrome of an error pattern of type `pauli`: `H * e` over GF(2).
pub fn syndrome(code: &CodeSpec, e: &ErrorPattern, pauli: Pauli) -> Result<Syndrome> {
    if e.len() != code.n_qubits() {
        return Err(Error::param(format!(
            "error pattern length {} does not match {} qubits",
            e.len(),
            code.n_qubits()
        )));
    }
    Ok(Syndrome::from_bits(code.checks_for(pauli).mul_vec(e.as_bits())))
}

/// True iff the residual `e ^ e_hat` acts as a logical operator, i.e. it
/// anticommutes with some opposite-type logical. The caller guarantees both
/// patterns have the same syndrome.
pub fn logical_failure(
    code: &CodeSpec,
    e: &ErrorPattern,
    e_hat: &ErrorPattern,
    pauli: Pauli,
) -> Result<bool> {
    if e.len() != code.n_qubits() || e_hat.len() != code.n_qubits() {
        return Err(Error::param("error pattern length mismatch"));
    }
    let residual = e.xor(e_hat);
    Ok(code
        .logicals_against(pauli)
        .iter()
        .any(|l| residual.as_bits().parity_and(l)))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Hand-constructed d=3 parity checks, derived by walking the 5x5
    /// interleaved lattice on paper. Keeps the index contract honest.
    const D3_HX: [&[usize]; 6] = [
        &[0, 1, 3],
        &[1, 2, 4],
        &[3, 5, 6, 8],
        &[4, 6, 7, 9],
        &[8, 10, 11],
        &[9, 11, 12],
    ];
    const D3_HZ: [&[usize]; 6] = [
        &[0, 3, 5],
        &[1, 3, 4, 6],
        &[2, 4, 7],
        &[5, 8, 10],
        &[6, 8, 9, 11],
        &[7, 9, 12],
    ];

    #[test]
    fn d3_counts_and_matrices_match_hand_construction() {
        let code = build_surface_code(3).unwrap();
        assert_eq!(code.n_qubits(), 13);
        assert_eq!(code.h_x().n_rows(), 6);
        assert_eq!(code.h_z().n_rows(), 6);
        for (r, sup) in D3_HX.iter().enumerate() {
            let got: Vec<usize> = code.h_x().row(r).iter_ones().collect();
            assert_eq!(&got, sup, "h_x row {r}");
        }
        for (r, sup) in D3_HZ.iter().enumerate() {
            let got: Vec<usize> = code.h_z().row(r).iter_ones().collect();
            assert_eq!(&got, sup, "h_z row {r}");
        }
    }

    #[test]
    fn d5_counts_match_formula() {
        let code = build_surface_code(5).unwrap();
        assert_eq!(code.n_qubits(), 41);
        assert_eq!(code.h_x().n_rows(), 20);
        assert_eq!(code.h_z().n_rows(), 20);
    }

    #[test]
    fn css_commutation_holds() {
        for d in [3, 5, 7] {
            let code = build_surface_code(d).unwrap();
            assert!(code.h_x().orthogonal_rows(code.h_z()), "d={d}");
        }
    }

    #[test]
    fn graphlike_column_weights() {
        for d in [3usize, 5, 7, 9, 11] {
            let code = build_surface_code(d).unwrap();
            for h in [code.h_x(), code.h_z()] {
                for c in 0..code.n_qubits() {
                    let w = h.col_weight(c);
                    assert!((1..=2).contains(&w), "d={d} col {c} weight {w}");
                }
            }
        }
    }

    #[test]
    fn rejects_even_or_small_distance() {
        assert!(matches!(build_surface_code(4), Err(Error::InvalidParameter(_))));
        assert!(matches!(build_surface_code(1), Err(Error::InvalidParameter(_))));
        assert!(matches!(build_surface_code(0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn zero_error_gives_zero_syndrome() {
        let code = build_surface_code(3).unwrap();
        let e = ErrorPattern::zeros(code.n_qubits());
        assert!(syndrome(&code, &e, Pauli::Z).unwrap().is_trivial());
        assert!(syndrome(&code, &e, Pauli::X).unwrap().is_trivial());
    }

    #[test]
    fn single_z_flip_bulk_and_boundary() {
        let code = build_surface_code(3).unwrap();
        // Qubit 6 sits in the bulk for X checks: rows 2 and 3 of h_x contain it.
        let bulk = ErrorPattern::from_flipped(13, &[6]);
        let syn = syndrome(&code, &bulk, Pauli::Z).unwrap();
        assert_eq!(syn.unsatisfied(), &[2, 3]);
        // Qubit 0 is on the left rough boundary: only row 0 of h_x.
        let edge = ErrorPattern::from_flipped(13, &[0]);
        let syn = syndrome(&code, &edge, Pauli::Z).unwrap();
        assert_eq!(syn.unsatisfied(), &[0]);
    }

    #[test]
    fn syndrome_rejects_length_mismatch() {
        let code = build_surface_code(3).unwrap();
        let e = ErrorPattern::zeros(12);
        assert!(syndrome(&code, &e, Pauli::Z).is_err());
    }

    #[test]
    fn syndrome_is_linear() {
        use rand::{Rng, SeedableRng};
        let code = build_surface_code(5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let mut e1 = ErrorPattern::zeros(code.n_qubits());
            let mut e2 = ErrorPattern::zeros(code.n_qubits());
            for q in 0..code.n_qubits() {
                if rng.gen_bool(0.3) {
                    e1.toggle(q);
                }
                if rng.gen_bool(0.3) {
                    e2.toggle(q);
                }
            }
            for pauli in [Pauli::X, Pauli::Z] {
                let lhs = syndrome(&code, &e1.xor(&e2), pauli).unwrap();
                let rhs = syndrome(&code, &e1, pauli)
                    .unwrap()
                    .bits()
                    .xor(syndrome(&code, &e2, pauli).unwrap().bits());
                assert_eq!(lhs.bits(), &rhs);
            }
        }
    }

    #[test]
    fn logical_failure_cases() {
        let code = build_surface_code(3).unwrap();
        let e = ErrorPattern::from_flipped(13, &[3, 6]);
        // Zero residual.
        assert!(!logical_failure(&code, &e, &e, Pauli::Z).unwrap());
        // Residual equal to the logical Z string: fails.
        let lz: Vec<usize> = code.logicals_against(Pauli::X)[0].iter_ones().collect();
        let mut shifted = e.clone();
        for q in &lz {
            shifted.toggle(*q);
        }
        assert!(logical_failure(&code, &e, &shifted, Pauli::X).unwrap());
        // Residual equal to a stabilizer row: commutes with logicals.
        let stab: Vec<usize> = code.h_z().row(1).iter_ones().collect();
        let mut deformed = e.clone();
        for q in &stab {
            deformed.toggle(*q);
        }
        assert!(!logical_failure(&code, &e, &deformed, Pauli::Z).unwrap());
    }

    #[test]
    fn logical_z_has_weight_d() {
        for d in [3, 5, 7] {
            let code = build_surface_code(d).unwrap();
            assert_eq!(code.logicals_against(Pauli::X)[0].count_ones(), d);
            assert_eq!(code.logicals_against(Pauli::Z)[0].count_ones(), d);
        }
    }

    #[test]
    fn boundary_flags_match_weight_one_columns() {
        let code = build_surface_code(3).unwrap();
        // d=3: every X check touches a rough-boundary qubit.
        assert_eq!(code.boundary_checks(Pauli::Z), &[true; 6]);
        let code5 = build_surface_code(5).unwrap();
        let flags = code5.boundary_checks(Pauli::Z);
        // d=5 X checks form a 5x4 grid; only the first and last column of
        // each row touch the boundary.
        for row in 0..5 {
            for col in 0..4 {
                let expect = col == 0 || col == 3;
                assert_eq!(flags[row * 4 + col], expect, "row {row} col {col}");
            }
        }
    }

    #[test]
    fn from_parts_rejects_non_graphlike() {
        // Column 0 has weight 3.
        let h_x = BitMatrix::from_row_supports(3, &[vec![0, 1], vec![0, 2], vec![0]]);
        let h_z = BitMatrix::from_row_supports(3, &[]);
        let err = CodeSpec::from_parts(3, h_x, h_z, vec![], vec![], vec![(0, 0); 3], vec![]);
        assert!(matches!(err, Err(Error::InvalidParameter(_))));
    }
}
