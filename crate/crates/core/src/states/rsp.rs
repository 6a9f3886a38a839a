//! The remote-state-preparation state and its three classical extensions.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::extension::{li_luo_extend_with_witness, ClassicalExtension, FlagSplit};
use super::separable::{bloch_qubit, BlochAngles, SeparableDecomposition};
use crate::error::{invalid, Result};
use crate::partition::labels;
use crate::qcore::{ComplexMatrix, DensityMatrix, SubsystemLayout};

/// `(1/4) [[1,0,0,1],[0,1,0,0],[0,0,1,0],[1,0,0,1]]` on `[a:2, b:2]`.
pub fn build_rho_rsp() -> DensityMatrix {
    let mut m = ComplexMatrix::identity(4, 4);
    m[(0, 3)] = Complex64::new(1.0, 0.0);
    m[(3, 0)] = Complex64::new(1.0, 0.0);
    let layout = SubsystemLayout::new([(labels::A, 2), (labels::B, 2)]).expect("static layout");
    DensityMatrix::new(layout, m.scale(0.25)).expect("static shape")
}

fn qubit(theta: f64, phi: f64, label: &str) -> DensityMatrix {
    bloch_qubit(BlochAngles::new(theta, phi.rem_euclid(2.0 * PI)).expect("angles in range"), label)
        .expect("valid qubit")
}

/// `(1/3) Σ_k |w_k><w_k| ⊗ |w̄_k><w̄_k|` with `w_k` on the equator at azimuth
/// `2πk/3` and `w̄_k` its complex conjugate. Reduces exactly to
/// [`build_rho_rsp`]: Bloch vectors average to zero and the correlation
/// matrix is `diag(1/2, -1/2, 0)`.
pub fn rsp_three_term() -> SeparableDecomposition {
    let terms = (0..3)
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / 3.0;
            (1.0 / 3.0, qubit(PI / 2.0, phi, labels::A), qubit(PI / 2.0, -phi, labels::B))
        })
        .collect();
    SeparableDecomposition::from_triples(terms).expect("valid decomposition")
}

/// The literal three-state ensemble `|w_k> ⊗ |w_k>` with `(θ, φ)` in
/// `{(0,0), (2π/3,0), (2π/3,π)}`. Its reduction equals [`build_rho_rsp`]
/// only up to local unitaries.
pub fn rsp_three_term_literal() -> SeparableDecomposition {
    let angles = [(0.0, 0.0), (2.0 * PI / 3.0, 0.0), (2.0 * PI / 3.0, PI)];
    let terms = angles
        .iter()
        .map(|&(t, p)| (1.0 / 3.0, qubit(t, p, labels::A), qubit(t, p, labels::B)))
        .collect();
    SeparableDecomposition::from_triples(terms).expect("valid decomposition")
}

/// `(1/4)[|+x+x> + |-x-x> + |+y-y> + |-y+y>]` (as projectors).
pub fn rsp_four_term() -> SeparableDecomposition {
    let (px, mx, py, my) = (0.0, PI, PI / 2.0, 3.0 * PI / 2.0);
    let pairs = [(px, px), (mx, mx), (py, my), (my, py)];
    let terms = pairs
        .iter()
        .map(|&(pa, pb)| (0.25, qubit(PI / 2.0, pa, labels::A), qubit(PI / 2.0, pb, labels::B)))
        .collect();
    SeparableDecomposition::from_triples(terms).expect("valid decomposition")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RspVariant {
    /// Three-term extension on C^6 ⊗ C^6.
    Six,
    /// Four-term extension on C^8 ⊗ C^8.
    Eight,
    /// Four-term extension with flags packed into single qubits, C^4 ⊗ C^4.
    Opt,
}

impl RspVariant {
    pub const ALL: [RspVariant; 3] = [RspVariant::Six, RspVariant::Eight, RspVariant::Opt];

    pub fn name(self) -> &'static str {
        match self {
            Self::Six => "six",
            Self::Eight => "eight",
            Self::Opt => "opt",
        }
    }
}

impl fmt::Display for RspVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RspVariant {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "six" => Ok(Self::Six),
            "eight" => Ok(Self::Eight),
            "opt" => Ok(Self::Opt),
            _ => Err(invalid(format!("unknown extension variant '{s}' (six|eight|opt)"))),
        }
    }
}

/// Flags for the C^4 ⊗ C^4 extension: the x pair shares flag 0 and the y
/// pair flag 1 on each side, which is allowed because `|+x> ⊥ |-x>` and
/// `|+y> ⊥ |-y>`.
pub fn opt_flag_split() -> FlagSplit {
    FlagSplit::Factored {
        flag_dim_a: 2,
        flag_dim_b: 2,
        flags_a: vec![0, 0, 1, 1],
        flags_b: vec![0, 0, 1, 1],
    }
}

pub fn build_rsp_extension(variant: RspVariant) -> ClassicalExtension {
    let (decomp, split) = match variant {
        RspVariant::Six => (rsp_three_term(), FlagSplit::BothSides),
        RspVariant::Eight => (rsp_four_term(), FlagSplit::BothSides),
        RspVariant::Opt => (rsp_four_term(), opt_flag_split()),
    };
    li_luo_extend_with_witness(&decomp, &split).expect("fixed constructions are feasible")
}
