use std::ops::{Add, Mul, Sub};

/// A scalar function of time carried with its first two derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub rate: f64,
    pub accel: f64,
}

impl Jet {
    pub const fn new(value: f64, rate: f64, accel: f64) -> Self {
        Self { value, rate, accel }
    }

    pub const fn constant(value: f64) -> Self {
        Self::new(value, 0.0, 0.0)
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.value * s, self.rate * s, self.accel * s)
    }

    pub fn one_minus(self) -> Self {
        Self::new(1.0 - self.value, -self.rate, -self.accel)
    }

    pub fn is_static(&self) -> bool {
        self.rate == 0.0 && self.accel == 0.0
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::new(
            self.value + o.value,
            self.rate + o.rate,
            self.accel + o.accel,
        )
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet::new(
            self.value - o.value,
            self.rate - o.rate,
            self.accel - o.accel,
        )
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet::new(
            self.value * o.value,
            self.rate * o.value + self.value * o.rate,
            self.accel * o.value + 2.0 * self.rate * o.rate + self.value * o.accel,
        )
    }
}
