//! ABCD two-ports accumulated in double-double precision.
//!
//! Near a tank pole the series impedances reach 1e3–1e12 Ω and products of
//! several sections cancel catastrophically in `AD − BC`. Each real
//! component is carried as an unevaluated sum `hi + lo` (about 106 bits),
//! which keeps the cascade reciprocal (`det = 1`) to far below 1e−9 for
//! any realistic number of cells.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::SimError;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, rhs: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, rhs: Dd) -> Dd {
        self + (-rhs)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, rhs: Dd) -> Dd {
        let p = self.hi * rhs.hi;
        let e = self.hi.mul_add(rhs.hi, -p);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Cdd {
    re: Dd,
    im: Dd,
}

impl Cdd {
    const ZERO: Cdd = Cdd {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };
    const ONE: Cdd = Cdd {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    fn from_c64(z: Complex64) -> Self {
        Cdd {
            re: Dd::from_f64(z.re),
            im: Dd::from_f64(z.im),
        }
    }

    fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    fn scale(self, k: f64) -> Self {
        let k = Dd::from_f64(k);
        Cdd {
            re: self.re * k,
            im: self.im * k,
        }
    }
}

impl Add for Cdd {
    type Output = Cdd;
    fn add(self, rhs: Cdd) -> Cdd {
        Cdd {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for Cdd {
    type Output = Cdd;
    fn sub(self, rhs: Cdd) -> Cdd {
        Cdd {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    fn mul(self, rhs: Cdd) -> Cdd {
        Cdd {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

/// Transfer (ABCD) matrix `[[A, B], [C, D]]` of a two-port.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abcd {
    m: [Cdd; 4],
}

impl Abcd {
    pub fn identity() -> Self {
        Abcd {
            m: [Cdd::ONE, Cdd::ZERO, Cdd::ZERO, Cdd::ONE],
        }
    }

    pub fn from_entries(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Abcd {
            m: [a, b, c, d].map(Cdd::from_c64),
        }
    }

    /// Series impedance `[[1, Z], [0, 1]]`.
    pub fn series(z: Complex64) -> Self {
        Self::from_entries(
            Complex64::new(1.0, 0.0),
            z,
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        )
    }

    /// Shunt admittance `[[1, 0], [Y, 1]]`.
    pub fn shunt(y: Complex64) -> Self {
        Self::from_entries(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            y,
            Complex64::new(1.0, 0.0),
        )
    }

    pub fn a(&self) -> Complex64 {
        self.m[0].to_c64()
    }
    pub fn b(&self) -> Complex64 {
        self.m[1].to_c64()
    }
    pub fn c(&self) -> Complex64 {
        self.m[2].to_c64()
    }
    pub fn d(&self) -> Complex64 {
        self.m[3].to_c64()
    }

    /// `AD − BC`, evaluated at the accumulated precision.
    pub fn determinant(&self) -> Complex64 {
        let [a, b, c, d] = self.m;
        (a * d - b * c).to_c64()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Abcd) -> Abcd {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = next.m;
        Abcd {
            m: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
        }
    }

    /// Standard ABCD → S conversion at a real reference impedance.
    pub fn to_s(&self, z0: f64) -> Result<SParams, SimError> {
        if !(z0.is_finite() && z0 > 0.0) {
            return Err(SimError::Invalid {
                field: "z0",
                reason: format!("reference impedance must be > 0, got {z0}"),
            });
        }
        let [a, b, c, d] = self.m;
        let b_n = b.scale(1.0 / z0);
        let c_n = c.scale(z0);
        let den = (a + b_n + c_n + d).to_c64();
        if !(den.norm().is_finite() && den.norm() > 0.0) {
            return Err(SimError::Degenerate);
        }
        let two = Complex64::new(2.0, 0.0);
        Ok(SParams {
            s11: (a + b_n - c_n - d).to_c64() / den,
            s21: two / den,
            s12: two * (a * d - b * c).to_c64() / den,
            s22: (d + b_n - c_n - a).to_c64() / den,
        })
    }
}

/// Scattering parameters of a two-port.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SParams {
    pub s11: Complex64,
    pub s21: Complex64,
    pub s12: Complex64,
    pub s22: Complex64,
}

/// One element of a ladder network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Section {
    SeriesImpedance(Complex64),
    ShuntAdmittance(Complex64),
}

impl Section {
    pub fn abcd(&self) -> Abcd {
        match *self {
            Section::SeriesImpedance(z) => Abcd::series(z),
            Section::ShuntAdmittance(y) => Abcd::shunt(y),
        }
    }
}

/// Left-to-right product of the section matrices.
pub fn cascade_two_port(sections: &[Section]) -> Result<Abcd, SimError> {
    if sections.is_empty() {
        return Err(SimError::Invalid {
            field: "sections",
            reason: "cascade needs at least one section".into(),
        });
    }
    Ok(sections
        .iter()
        .fold(Abcd::identity(), |acc, s| acc.then(&s.abcd())))
}

/// S11 and S21 of a cascade at reference impedance `z0`.
pub fn s_parameters(abcd: &Abcd, z0: f64) -> Result<SParams, SimError> {
    abcd.to_s(z0)
}
