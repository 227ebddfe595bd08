//! Extension data 1 → N → G → E_n → 1 for a tail subgroup N of a pc group.

use super::{GroupElement, GroupError, PcGroup};
use crate::modrep::GModule;
use gf2core::{BitMatrix, BitVec};

/// Which generators span the kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelSpec {
    /// Generators `g_{h+1}, …, g_m` (0-based: indices `h..m`).
    Tail(usize),
    /// The trivial subgroup.
    Trivial,
}

/// Quotient rank, kernel action and the 2-cocycle data of an extension with
/// elementary abelian kernel and elementary abelian quotient.
#[derive(Clone, Debug)]
pub struct ExtensionData {
    pub n: usize,
    pub kernel_rank: usize,
    /// Action of σ_i on the kernel by conjugation, as column-vector matrices.
    pub action: GModule,
    /// σ̂_i² in kernel coordinates.
    pub squares: Vec<BitVec>,
    /// `commutators[i][j]` (i < j) is [σ̂_i, σ̂_j] in kernel coordinates.
    pub commutators: Vec<Vec<BitVec>>,
    /// `mixed[i][j]` (i < j) is σ̂_j σ̂_i σ̂_j⁻¹ σ̂_i⁻¹, the cocycle value at e_i + e_j.
    pub mixed: Vec<Vec<BitVec>>,
}

impl ExtensionData {
    /// σ̂_i² when i = j, [σ̂_i, σ̂_j] when i < j.
    pub fn pair(&self, i: usize, j: usize) -> &BitVec {
        assert!(i <= j);
        if i == j {
            &self.squares[i]
        } else {
            &self.commutators[i][j]
        }
    }

    /// Cocycle value at a degree-2 multi-index given by its two (sorted) positions.
    pub fn cocycle(&self, i: usize, j: usize) -> &BitVec {
        assert!(i <= j);
        if i == j {
            &self.squares[i]
        } else {
            &self.mixed[i][j]
        }
    }
}

impl PcGroup {
    pub fn extension_data(&self, kernel: KernelSpec) -> Result<ExtensionData, GroupError> {
        let m = self.num_gens();
        let h = match kernel {
            KernelSpec::Tail(h) => h,
            KernelSpec::Trivial => m,
        };
        if h > m {
            return Err(GroupError::OutOfRange(format!("kernel starts at {h}")));
        }
        let r = m - h;
        let tail_coords = |x: GroupElement| -> Result<BitVec, GroupError> {
            if x.0 & ((1u64 << h) - 1) != 0 {
                return Err(GroupError::QuotientNotElementary);
            }
            Ok(BitVec::from_u64(r, x.0 >> h))
        };
        // Kernel: elementary abelian.
        for a in h..m {
            if self.power_relation(a).0 != 0 {
                return Err(GroupError::NotElementaryAbelian);
            }
            for b in a + 1..m {
                if self.commutator_relation(a, b).0 != 0 {
                    return Err(GroupError::NotElementaryAbelian);
                }
            }
        }
        // Normality: conjugates of kernel generators stay in the kernel.
        let mut action = Vec::with_capacity(h);
        for i in 0..h {
            let gi = self.generator(i);
            let mut mat = BitMatrix::zeros(r, r);
            for a in 0..r {
                let c = self.conjugate(self.generator(h + a), gi);
                if c.0 & ((1u64 << h) - 1) != 0 {
                    return Err(GroupError::NotNormal);
                }
                for b in 0..r {
                    if c.0 >> (h + b) & 1 == 1 {
                        mat.set(b, a, true);
                    }
                }
            }
            action.push(mat);
        }
        let mut squares = Vec::with_capacity(h);
        let mut commutators = vec![vec![BitVec::zeros(r); h]; h];
        let mut mixed = vec![vec![BitVec::zeros(r); h]; h];
        for i in 0..h {
            let gi = self.generator(i);
            squares.push(tail_coords(self.square(gi)?)?);
            for j in i + 1..h {
                let gj = self.generator(j);
                commutators[i][j] = tail_coords(self.commutator(gi, gj)?)?;
                let x = self.multiply(
                    self.multiply(self.multiply(gj, gi), self.inverse(gj)),
                    self.inverse(gi),
                );
                mixed[i][j] = tail_coords(x)?;
            }
        }
        let action =
            GModule::new(h, action).map_err(|e| GroupError::Construction(e.to_string()))?;
        Ok(ExtensionData {
            n: h,
            kernel_rank: r,
            action,
            squares,
            commutators,
            mixed,
        })
    }
}
