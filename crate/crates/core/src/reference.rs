//! Independent brute-force reference engine.
//!
//! Everything here works by assembling explicit dense matrices (Kronecker
//! products, projectors, rectangular isometries) and multiplying them out —
//! deliberately sharing no code with the bit-twiddling amplitude updates in
//! [`crate::qstate`].  Cross-checks compare the two paths amplitude by
//! amplitude on registers of up to five subsystems.
//!
//! Slot numbering matches the register convention: slot 0 is the most
//! significant bit of a basis index.

use num_complex::Complex64;

use crate::qstate::Mat2;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Complex64>,
}

impl DMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = one();
        }
        m
    }

    pub fn from_mat2(m: &Mat2) -> Self {
        let mut out = Self::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                out[(i, j)] = m[i][j];
            }
        }
        out
    }

    /// Column vector from a slice.
    pub fn column(v: &[Complex64]) -> Self {
        let mut out = Self::zeros(v.len(), 1);
        for (i, a) in v.iter().enumerate() {
            out[(i, 0)] = *a;
        }
        out
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x += y;
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        let mut out = vec![zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[i] += self[(i, j)] * v[j];
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for DMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Projector |bit⟩⟨bit| on one two-level system.
pub fn projector(bit: usize) -> DMatrix {
    let mut p = DMatrix::zeros(2, 2);
    p[(bit, bit)] = one();
    p
}

/// `I ⊗ … ⊗ m ⊗ … ⊗ I` with `m` at `slot` of an `n`-subsystem register.
pub fn site_op(n: usize, slot: usize, m: &Mat2) -> DMatrix {
    kron_chain(n, &[(slot, DMatrix::from_mat2(m))])
}

fn kron_chain(n: usize, placed: &[(usize, DMatrix)]) -> DMatrix {
    let mut out = DMatrix::identity(1);
    for slot in 0..n {
        let factor = placed
            .iter()
            .find(|(s, _)| *s == slot)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| DMatrix::identity(2));
        out = out.kron(&factor);
    }
    out
}

/// Unitary on `target` applied only where `control` carries `control_bit`.
pub fn controlled_op(
    n: usize,
    control: usize,
    control_bit: usize,
    target: usize,
    m: &Mat2,
) -> DMatrix {
    let active = kron_chain(
        n,
        &[(control, projector(control_bit)), (target, DMatrix::from_mat2(m))],
    );
    let idle = kron_chain(n, &[(control, projector(1 - control_bit))]);
    active.add(&idle)
}

/// Diagonal cavity-reflection map: `r0` on |h⟩|G⟩, `r` on |h⟩|S⟩, identity on |v⟩.
pub fn reflection_op(
    n: usize,
    pol_slot: usize,
    ens_slot: usize,
    r: Complex64,
    r0: Complex64,
) -> DMatrix {
    let mut cavity = DMatrix::zeros(2, 2);
    cavity[(0, 0)] = r0;
    cavity[(1, 1)] = r;
    let h_part = kron_chain(n, &[(pol_slot, projector(0)), (ens_slot, cavity)]);
    let v_part = kron_chain(n, &[(pol_slot, projector(1))]);
    h_part.add(&v_part)
}

/// Isometry appending fresh subsystems (least-significant slots) in `state`.
pub fn append_op(n: usize, state: &[Complex64]) -> DMatrix {
    DMatrix::identity(1 << n).kron(&DMatrix::column(state))
}

/// Contraction keeping only `slot = bit` and removing that slot
/// (`2^(n−1) × 2^n`).
pub fn keep_slot_op(n: usize, slot: usize, bit: usize) -> DMatrix {
    let shift = n - 1 - slot;
    let mut m = DMatrix::zeros(1 << (n - 1), 1 << n);
    for idx in 0..1usize << n {
        if (idx >> shift) & 1 == bit {
            let high = idx >> (shift + 1);
            let low = idx & ((1 << shift) - 1);
            m[((high << shift) | low, idx)] = one();
        }
    }
    m
}

/// Square matrix defined by a basis map `idx → (new_idx, amplitude)`.
pub fn basis_map_op(n: usize, f: impl Fn(usize) -> (usize, Complex64)) -> DMatrix {
    let dim = 1 << n;
    let mut m = DMatrix::zeros(dim, dim);
    for idx in 0..dim {
        let (out, amp) = f(idx);
        m[(out, idx)] += amp;
    }
    m
}

/// Rectangular matrix (`2^out_bits × 2^in_bits`) defined column-wise.
pub fn rect_op(
    out_bits: usize,
    in_bits: usize,
    f: impl Fn(usize) -> Vec<(usize, Complex64)>,
) -> DMatrix {
    let mut m = DMatrix::zeros(1 << out_bits, 1 << in_bits);
    for idx in 0..1usize << in_bits {
        for (out, amp) in f(idx) {
            m[(out, idx)] += amp;
        }
    }
    m
}

/// Encoder isometry written straight from its defining action
/// (`μ|h⟩ + ν|v⟩ → (1/√2)|h⟩ ⊗ (ν|u_l⟩ + ν|d_l⟩ + μ|u_s⟩ − μ|d_s⟩)`),
/// appending spatial and time-bin slots after the existing register.
pub fn encoder_op(n: usize, pol_slot: usize) -> DMatrix {
    let shift = n - 1 - pol_slot;
    let w = Complex64::new(SQRT_HALF, 0.0);
    rect_op(n + 2, n, |idx| {
        let base = idx << 2; // appended slots: path (bit 1), bin (bit 0)
        if (idx >> shift) & 1 == 0 {
            // h → (1/√2) h ⊗ (|u s⟩ − |d s⟩); path u = 0, bin s = 1.
            vec![(base | 0b01, w), (base | 0b11, -w)]
        } else {
            // v → (1/√2) h ⊗ (|u l⟩ + |d l⟩), polarization reset to h.
            let hbase = (idx & !(1 << shift)) << 2;
            vec![(hbase, w), (hbase | 0b10, w)]
        }
    })
}

/// Decoder as one rectangular matrix (`2^(n−1) × 2^n`): π shifter on the `d`
/// arm, recombining beam splitter, time-bin retirement, half-wave plates and
/// the port-sorting PBS, each an explicit matrix.
///
/// `pol_slot`, `path_slot`, `bin_slot` index the photon's subsystems; the
/// output register drops the bin slot and reinterprets the path slot as the
/// output port.
pub fn decoder_op(n: usize, pol_slot: usize, path_slot: usize, bin_slot: usize) -> DMatrix {
    let pz = crate::qstate::pauli_z();
    let h = crate::qstate::hadamard();
    let px = crate::qstate::pauli_x();

    let shifter = site_op(n, path_slot, &pz);
    let splitter = site_op(n, path_slot, &h);

    // Retirement: keep (d, l) and (u, s), dropping the bin slot.
    let path_shift = n - 1 - path_slot;
    let bin_shift = n - 1 - bin_slot;
    let retire = rect_op(n - 1, n, |idx| {
        let path_bit = (idx >> path_shift) & 1;
        let bin_bit = (idx >> bin_shift) & 1;
        if path_bit + bin_bit == 1 {
            let high = idx >> (bin_shift + 1);
            let low = idx & ((1 << bin_shift) - 1);
            vec![((high << bin_shift) | low, one())]
        } else {
            vec![]
        }
    });

    // Slots after retirement (bin removed).
    let reduced = n - 1;
    let adj = |slot: usize| if slot > bin_slot { slot - 1 } else { slot };
    let hwp_u = controlled_op(reduced, adj(path_slot), 0, adj(pol_slot), &px);
    let pbs = controlled_op(reduced, adj(pol_slot), 0, adj(path_slot), &px);
    let hwp_port1 = controlled_op(reduced, adj(path_slot), 0, adj(pol_slot), &px);

    hwp_port1
        .matmul(&pbs)
        .matmul(&hwp_u)
        .matmul(&retire)
        .matmul(&splitter)
        .matmul(&shifter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{hadamard, pauli_x};

    #[test]
    fn kron_and_matmul_agree_with_hand_values() {
        let h = DMatrix::from_mat2(&hadamard());
        let x = DMatrix::from_mat2(&pauli_x());
        let hx = h.matmul(&x);
        // H·X swaps the columns of H.
        assert!((hx[(0, 0)] - Complex64::new(SQRT_HALF, 0.0)).norm() < 1e-15);
        assert!((hx[(1, 0)] + Complex64::new(SQRT_HALF, 0.0)).norm() < 1e-15);
        let hh = h.kron(&h);
        assert_eq!(hh.rows, 4);
        assert!((hh[(3, 3)] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn controlled_op_only_touches_active_branch() {
        let cnot = controlled_op(2, 0, 1, 1, &pauli_x());
        let v = vec![zero(), zero(), one(), zero()]; // |10⟩
        let out = cnot.apply(&v);
        assert!((out[3] - one()).norm() < 1e-15); // |11⟩
        let v = vec![one(), zero(), zero(), zero()]; // |00⟩
        let out = cnot.apply(&v);
        assert!((out[0] - one()).norm() < 1e-15);
    }

    #[test]
    fn keep_slot_contracts() {
        let m = keep_slot_op(2, 0, 1);
        let v = vec![zero(), zero(), Complex64::new(0.0, 0.5), one()]; // on |10⟩,|11⟩
        let out = m.apply(&v);
        assert_eq!(out.len(), 2);
        assert!((out[0] - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!((out[1] - one()).norm() < 1e-15);
    }
}
