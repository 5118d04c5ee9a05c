//! Published closed forms for the oscillator examples in three dimensions,
//! evaluated in floating point at given coefficients.

use std::fmt;
use std::str::FromStr;

use heattrace::exactalg::{int, to_f64};
use heattrace::parametrix::PotentialSpec;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixtureCase {
    Harmonic3d,
    Quartic3d,
    Sestic3d,
}

impl FixtureCase {
    pub const ALL: [FixtureCase; 3] = [
        FixtureCase::Harmonic3d,
        FixtureCase::Quartic3d,
        FixtureCase::Sestic3d,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FixtureCase::Harmonic3d => "harmonic3d",
            FixtureCase::Quartic3d => "quartic3d",
            FixtureCase::Sestic3d => "sestic3d",
        }
    }

    /// Degree `q` of the family.
    pub fn degree(self) -> u32 {
        match self {
            FixtureCase::Harmonic3d => 2,
            FixtureCase::Quartic3d => 4,
            FixtureCase::Sestic3d => 6,
        }
    }

    /// Highest `j` with a printed formula.
    pub fn order(self) -> usize {
        match self {
            FixtureCase::Harmonic3d => 4,
            _ => 10,
        }
    }

    /// Default coefficients: `c = 1`; `(1, 2, 3)`; `(1, 1, 1, 1)`.
    pub fn default_potential(self) -> PotentialSpec {
        let coeffs: Vec<(u32, i64)> = match self {
            FixtureCase::Harmonic3d => vec![(2, 1)],
            FixtureCase::Quartic3d => vec![(0, 1), (2, 2), (4, 3)],
            FixtureCase::Sestic3d => vec![(0, 1), (2, 1), (4, 1), (6, 1)],
        };
        PotentialSpec::new(3, coeffs.into_iter().map(|(j, c)| (j, int(c)))).expect("valid fixture")
    }

    /// Whether `potential` belongs to the family (three dimensions, matching degree,
    /// and for the oscillator no other terms).
    pub fn accepts(self, potential: &PotentialSpec) -> bool {
        potential.dimension() == 3
            && potential.degree() == self.degree()
            && (self != FixtureCase::Harmonic3d || potential.harmonic_coupling().is_some())
    }

    /// Printed `a_0..a_order` at the coefficients of `potential`; zeros where nothing is printed.
    pub fn printed(self, potential: &PotentialSpec) -> Vec<f64> {
        let c = |j: u32| to_f64(&potential.coeff(j));
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let mut a = vec![0.0; self.order() + 1];
        match self {
            FixtureCase::Harmonic3d => {
                let c2 = c(2);
                a[0] = sqrt_pi / 4.0;
                a[4] = -sqrt_pi * c2 / 8.0;
            }
            FixtureCase::Quartic3d => {
                let (c0, c2, c4) = (c(0), c(2), c(4));
                let (g1, g3) = (gamma(0.25), gamma(0.75));
                a[0] = g3 / 4.0;
                a[2] = -c2 / (16.0 * c4.sqrt()) * g1;
                a[4] = (3.0 / 32.0 * c2.powi(2) - c0 * c4 / 4.0) / c4 * g3;
                a[6] = -(5.0 / 384.0 * c2.powi(3) - c0 * c2 * c4 / 16.0 + 5.0 / 48.0 * c4.powi(2))
                    / c4.powf(1.5)
                    * g1;
                a[8] = (7.0 / 512.0 * c2.powi(4) - 3.0 / 32.0 * c0 * c2.powi(2) * c4
                    + 3.0 / 16.0 * c2 * c4.powi(2)
                    + c0.powi(2) * c4.powi(2) / 8.0)
                    / c4.powi(2)
                    * g3;
                a[10] = -(3.0 / 2048.0 * c2.powi(5) - 5.0 / 384.0 * c0 * c2.powi(3) * c4
                    + 13.0 / 384.0 * c2.powi(2) * c4.powi(2)
                    + c0.powi(2) * c2 * c4.powi(2) / 32.0
                    - 5.0 / 48.0 * c0 * c4.powi(3))
                    / c4.powf(2.5)
                    * g1;
            }
            FixtureCase::Sestic3d => {
                let (c0, c2, c4, c6) = (c(0), c(2), c(4), c(6));
                let (g1, g5) = (gamma(1.0 / 6.0), gamma(5.0 / 6.0));
                a[0] = sqrt_pi / 6.0;
                a[2] = -c4 / (36.0 * c6.powf(2.0 / 3.0)) * g1;
                a[4] = (5.0 / 72.0 * c4.powi(2) - c2 * c6 / 6.0) / c6.powf(4.0 / 3.0) * g5;
                a[6] =
                    -sqrt_pi / c6.powi(2) * (c4.powi(3) / 48.0 - c2 * c4 * c6 / 12.0 + c0 * c6.powi(2) / 6.0);
                a[8] = (91.0 / 31104.0 * c4.powi(4) - 7.0 / 432.0 * c2 * c4.powi(2) * c6
                    + c0 * c4 * c6.powi(2) / 36.0
                    + c2.powi(2) * c6.powi(2) / 72.0
                    - 7.0 / 72.0 * c6.powi(3))
                    / c6.powf(8.0 / 3.0)
                    * g1;
                a[10] = -(187.0 / 31104.0 * c4.powi(5) - 55.0 / 1296.0 * c2 * c4.powi(3) * c6
                    + 5.0 / 72.0 * c2.powi(2) * c4 * c6.powi(2)
                    + 5.0 / 72.0 * c0 * c4.powi(2) * c6.powi(2)
                    - c0 * c2 * c6.powi(3) / 6.0
                    - 5.0 / 24.0 * c4 * c6.powi(3))
                    / c6.powf(10.0 / 3.0)
                    * g5;
            }
        }
        a
    }
}

impl fmt::Display for FixtureCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FixtureCase {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FixtureCase::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown case '{s}', expected harmonic3d, quartic3d or sestic3d"))
    }
}
