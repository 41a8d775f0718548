//! The acceptance checks, their tolerances and the subcommand that exercises
//! each one.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Check {
    pub id: u32,
    pub name: &'static str,
    pub command: &'static str,
    pub tolerance: f64,
    pub description: &'static str,
}

pub const CHECKS: &[Check] = &[
    Check {
        id: 1,
        name: "equivalence",
        command: "verify-equivalence",
        tolerance: 1e-11,
        description: "Schrödinger vs two coupled beams, relative sup norm, 10 seeds, 1D n=256 and 2D 64², t in {0.1, 1, 10}, under 10 s",
    },
    Check {
        id: 2,
        name: "coupled-mode-identities",
        command: "symplectic",
        tolerance: 1e-4,
        description: "central differences (step 1e-6) of the closed-form mode amplitudes against k²ṽ, -k²ũ and the |k|_p^α analogues",
    },
    Check {
        id: 3,
        name: "conservation",
        command: "symplectic",
        tolerance: 1e-12,
        description: "H_sym under exact rotation over [0, 10]; leapfrog oscillation at most 1e-4 over 1e4 steps with fitted slope within one standard error of 0",
    },
    Check {
        id: 4,
        name: "generalized-propagator",
        command: "hamiltonian",
        tolerance: 1e-4,
        description: "cos/sin propagator solves iψ̇ = Hψ for random smooth V on n=128; V=0 reduces to the free flow within 1e-10; expanded identity residual at most 1e-10",
    },
    Check {
        id: 5,
        name: "flat-metric-reduction",
        command: "hamiltonian",
        tolerance: 0.2,
        description: "lowest 5 eigenvalues of -Δ_g with flat metric approach the free spectrum with error ratio 4 ± 20% under grid doubling",
    },
    Check {
        id: 6,
        name: "eigenfrequency-correspondence",
        command: "eigenmodes",
        tolerance: 1e-2,
        description: "simply supported beam vs Dirichlet box, L = π, n = 512, |ω_n - n²|/n² for n ≤ 5",
    },
    Check {
        id: 7,
        name: "two-slit",
        command: "two-slit",
        tolerance: 1e-10,
        description: "Schrödinger vs beam fields in sup norm, at least 3 fringes with visibility ≥ 0.5, spacing within 30% of the Fraunhofer estimate, y-symmetry, under 60 s at 256²",
    },
    Check {
        id: 8,
        name: "p-adic",
        command: "padic",
        tolerance: 1e-12,
        description: "p in {2,3,5}, α in {0.5,1,2}, window (3,3): equivalence residual, l² norm and H_sym conservation, unit-ball self-duality against the character sum",
    },
    Check {
        id: 9,
        name: "convergence-orders",
        command: "symplectic",
        tolerance: 0.1,
        description: "leapfrog self-convergence order 2.0 ± 0.1; finite-difference eigenvalue order 2.0 ± 0.2",
    },
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_sequential() {
        for (i, c) in CHECKS.iter().enumerate() {
            assert_eq!(c.id as usize, i + 1);
        }
    }
}
