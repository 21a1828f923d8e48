//! Angles on the pi/4 grid and Bloch-sphere directions.

use crate::error::{QsimError, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// An angle restricted to the eight multiples of pi/4, stored as the
/// multiple in `0..8`. All arithmetic is exact (mod 8), which keeps the
/// protocol's angle bookkeeping free of floating-point drift and makes
/// angles hashable for tabulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Angle(u8);

impl Angle {
    pub const ZERO: Angle = Angle(0);
    pub const PI: Angle = Angle(4);

    /// Angle from an integer multiple of pi/4 (reduced mod 8).
    pub fn from_multiple(k: i64) -> Angle {
        Angle(k.rem_euclid(8) as u8)
    }

    /// Angle from radians, which must sit on the pi/4 grid to within 1e-9.
    pub fn from_radians(theta: f64) -> Result<Angle> {
        let k = theta / FRAC_PI_4;
        let rounded = k.round();
        if (k - rounded).abs() > 1e-9 {
            return Err(QsimError::InvalidAngle(theta));
        }
        Ok(Angle::from_multiple(rounded as i64))
    }

    /// The grid index in `0..8`.
    pub fn multiple(self) -> u8 {
        self.0
    }

    pub fn radians(self) -> f64 {
        f64::from(self.0) * FRAC_PI_4
    }

    /// `e^{i theta}` evaluated exactly for the special multiples.
    pub fn phase(self) -> crate::C64 {
        // cos/sin of k*pi/4 hit exact values at even k; use the closed forms
        // to keep repeated angle arithmetic bit-stable.
        const R: f64 = std::f64::consts::FRAC_1_SQRT_2;
        match self.0 {
            0 => crate::C64::new(1.0, 0.0),
            1 => crate::C64::new(R, R),
            2 => crate::C64::new(0.0, 1.0),
            3 => crate::C64::new(-R, R),
            4 => crate::C64::new(-1.0, 0.0),
            5 => crate::C64::new(-R, -R),
            6 => crate::C64::new(0.0, -1.0),
            7 => crate::C64::new(R, -R),
            _ => unreachable!("angle stored mod 8"),
        }
    }

    /// All eight grid angles in order.
    pub fn all() -> [Angle; 8] {
        [
            Angle(0),
            Angle(1),
            Angle(2),
            Angle(3),
            Angle(4),
            Angle(5),
            Angle(6),
            Angle(7),
        ]
    }

    pub fn is_zero_or_pi(self) -> bool {
        self.0 == 0 || self.0 == 4
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle((self.0 + rhs.0) % 8)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle((8 + self.0 - rhs.0) % 8)
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle((8 - self.0) % 8)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}pi/4", self.0)
    }
}

/// A unit vector on the Bloch sphere, defining the two-outcome projective
/// measurement with projectors `(I ± v·(X, Y, Z))/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    /// Build a Bloch vector, enforcing unit norm to within 1e-10.
    pub fn new(x: f64, y: f64, z: f64) -> Result<BlochVector> {
        let norm2 = x * x + y * y + z * z;
        if (norm2 - 1.0).abs() > crate::TOL_INVARIANT {
            return Err(QsimError::InvalidBlochVector(x, y, z));
        }
        Ok(BlochVector { x, y, z })
    }

    /// Normalize an arbitrary nonzero vector onto the sphere.
    pub fn normalized(x: f64, y: f64, z: f64) -> BlochVector {
        let n = (x * x + y * y + z * z).sqrt();
        assert!(n > 0.0, "cannot normalize the zero vector");
        BlochVector {
            x: x / n,
            y: y / n,
            z: z / n,
        }
    }

    pub const X: BlochVector = BlochVector {
        x: 1.0,
        y: 0.0,
        z: 0.0,
    };
    pub const Y: BlochVector = BlochVector {
        x: 0.0,
        y: 1.0,
        z: 0.0,
    };
    pub const Z: BlochVector = BlochVector {
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    /// The in-plane XY direction at the given grid angle.
    pub fn xy_at(theta: Angle) -> BlochVector {
        let p = theta.phase();
        BlochVector {
            x: p.re,
            y: p.im,
            z: 0.0,
        }
    }

    pub fn dot(self, other: BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn scaled(self, s: f64) -> BlochVector {
        BlochVector {
            x: self.x * s,
            y: self.y * s,
            z: self.z * s,
        }
    }

    /// Reflection about the XY plane: (x, y, z) -> (x, y, -z).
    pub fn reflect_xy(self) -> BlochVector {
        BlochVector {
            x: self.x,
            y: self.y,
            z: -self.z,
        }
    }

    /// Rotate within the XY plane by `eta` radians (z component fixed).
    pub fn rotated_about_z(self, eta: f64) -> BlochVector {
        let (s, c) = eta.sin_cos();
        BlochVector {
            x: c * self.x - s * self.y,
            y: s * self.x + c * self.y,
            z: self.z,
        }
    }
}
