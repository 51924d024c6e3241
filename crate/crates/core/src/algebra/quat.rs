use std::ops::{Add, Mul, Neg, Sub};

/// Quaternion `w + x i + y j + z k`. Real and complex numbers are the
/// subalgebras with `y = z = 0` (and `x = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quat {
    pub const ZERO: Quat = Quat::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quat = Quat::new(1.0, 0.0, 0.0, 0.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Component `c` in the order 1, i, j, k.
    pub fn component(self, c: usize) -> f64 {
        [self.w, self.x, self.y, self.z][c]
    }

    pub fn from_components(c: &[f64]) -> Self {
        let g = |i: usize| c.get(i).copied().unwrap_or(0.0);
        Self::new(g(0), g(1), g(2), g(3))
    }
}

impl Add for Quat {
    type Output = Quat;
    fn add(self, o: Quat) -> Quat {
        Quat::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quat {
    type Output = Quat;
    fn sub(self, o: Quat) -> Quat {
        Quat::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        Quat::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quat {
    type Output = Quat;
    fn mul(self, o: Quat) -> Quat {
        Quat::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

/// Dense square matrix over the quaternions, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct QuatMatrix {
    n: usize,
    data: Vec<Quat>,
}

impl QuatMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Quat::ZERO; n * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Quat {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, q: Quat) {
        self.data[i * self.n + j] = q;
    }

    pub fn mul(&self, other: &QuatMatrix) -> QuatMatrix {
        let n = self.n;
        let mut out = QuatMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> QuatMatrix {
        let n = self.n;
        let mut out = QuatMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Real part of the trace.
    pub fn real_trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i).w).sum()
    }
}
