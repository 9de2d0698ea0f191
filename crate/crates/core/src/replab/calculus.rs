use std::sync::Arc;

use num_complex::Complex64;

use super::{CMat, CVec, Vec3};

/// Values a coefficient function may take.
pub trait CoeffValue: Clone + Send + Sync + 'static {
    fn add(&self, o: &Self) -> Self;
    fn scale(&self, c: Complex64) -> Self;
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(Complex64::from(-1.0)))
    }
}

impl CoeffValue for Complex64 {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn scale(&self, c: Complex64) -> Self {
        self * c
    }
}

impl CoeffValue for CMat {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn scale(&self, c: Complex64) -> Self {
        self * c
    }
}

type Eval<T> = Arc<dyn Fn(&Vec3) -> T + Send + Sync>;
type Grad<T> = Arc<dyn Fn(&Vec3) -> [T; 3] + Send + Sync>;

/// How coefficient gradients are obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GradientMode {
    /// Exact gradients where attached, central differences at `1e-5` otherwise.
    Exact,
    /// Central differences at the given step, even where exact gradients exist.
    FiniteDifference(f64),
}

const FALLBACK_STEP: f64 = 1e-5;

/// A function of `q` with an optional exact gradient.
#[derive(Clone)]
pub struct CoeffFn<T: CoeffValue> {
    f: Eval<T>,
    grad: Option<Grad<T>>,
}

impl<T: CoeffValue> CoeffFn<T> {
    pub fn new(f: impl Fn(&Vec3) -> T + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f), grad: None }
    }

    pub fn with_gradient(
        f: impl Fn(&Vec3) -> T + Send + Sync + 'static,
        g: impl Fn(&Vec3) -> [T; 3] + Send + Sync + 'static,
    ) -> Self {
        Self { f: Arc::new(f), grad: Some(Arc::new(g)) }
    }

    pub fn constant(v: T) -> Self {
        let zero = v.scale(Complex64::from(0.0));
        let v2 = v.clone();
        Self::with_gradient(move |_| v2.clone(), move |_| [zero.clone(), zero.clone(), zero.clone()])
    }

    pub fn eval(&self, q: &Vec3) -> T {
        (self.f)(q)
    }

    pub fn has_exact_gradient(&self) -> bool {
        self.grad.is_some()
    }

    pub fn fd_gradient(&self, q: &Vec3, h: f64) -> [T; 3] {
        std::array::from_fn(|m| {
            let mut qp = *q;
            let mut qm = *q;
            qp[m] += h;
            qm[m] -= h;
            self.eval(&qp).sub(&self.eval(&qm)).scale(Complex64::from(0.5 / h))
        })
    }

    pub fn gradient(&self, q: &Vec3, mode: GradientMode) -> [T; 3] {
        match (mode, &self.grad) {
            (GradientMode::Exact, Some(g)) => g(q),
            (GradientMode::Exact, None) => self.fd_gradient(q, FALLBACK_STEP),
            (GradientMode::FiniteDifference(h), _) => self.fd_gradient(q, h),
        }
    }

    /// Directional derivative `Σ_m w_m ∂_m`.
    fn along(&self, q: &Vec3, w: &[Complex64; 3], mode: GradientMode) -> T {
        let g = self.gradient(q, mode);
        g[0].scale(w[0]).add(&g[1].scale(w[1])).add(&g[2].scale(w[2]))
    }
}

/// `Σ_m A_m(q) ∂/∂q_m + B(q)` acting on `C^dim`-valued functions, with the
/// derivative part scalar in spin space.
#[derive(Clone)]
pub struct FirstOrderOp {
    pub dim: usize,
    pub a: [CoeffFn<Complex64>; 3],
    pub b: CoeffFn<CMat>,
}

/// A first-order operator frozen at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointOp {
    pub a: [Complex64; 3],
    pub b: CMat,
}

impl PointOp {
    pub fn zero(dim: usize) -> Self {
        Self { a: [Complex64::from(0.0); 3], b: CMat::zeros(dim, dim) }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { a: std::array::from_fn(|m| self.a[m] + o.a[m]), b: &self.b + &o.b }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(Complex64::from(-1.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { a: self.a.map(|x| x * c), b: &self.b * c }
    }

    pub fn is_zeroth_order(&self) -> bool {
        self.a.iter().all(|x| *x == Complex64::from(0.0))
    }

    /// Product of two multiplication operators.
    pub fn mul_zeroth(&self, o: &Self) -> Option<Self> {
        (self.is_zeroth_order() && o.is_zeroth_order()).then(|| Self { a: self.a, b: &self.b * &o.b })
    }

    /// Largest entry in absolute value.
    pub fn max_abs(&self) -> f64 {
        self.a.iter().map(|x| x.norm()).fold(self.b.iter().map(|x| x.norm()).fold(0.0, f64::max), f64::max)
    }
}

impl FirstOrderOp {
    pub fn zero(dim: usize) -> Self {
        Self::multiplication(CoeffFn::constant(CMat::zeros(dim, dim)), dim)
    }

    pub fn multiplication(b: CoeffFn<CMat>, dim: usize) -> Self {
        let z = || CoeffFn::constant(Complex64::from(0.0));
        Self { dim, a: [z(), z(), z()], b }
    }

    /// A scalar function times the identity.
    pub fn scalar(f: CoeffFn<Complex64>, dim: usize) -> Self {
        let id = CMat::identity(dim, dim);
        let id2 = id.clone();
        let f2 = f.clone();
        let b = CoeffFn::with_gradient(
            move |q| &id * f.eval(q),
            move |q| f2.gradient(q, GradientMode::Exact).map(|g| &id2 * g),
        );
        Self::multiplication(b, dim)
    }

    pub fn at(&self, q: &Vec3) -> PointOp {
        PointOp { a: std::array::from_fn(|m| self.a[m].eval(q)), b: self.b.eval(q) }
    }

    /// `(X f)(q)` given the value and gradient of `f` at `q`.
    pub fn apply(&self, q: &Vec3, f: &CVec, grad: &[CVec; 3]) -> CVec {
        let p = self.at(q);
        let mut out = &p.b * f;
        for m in 0..3 {
            out += &grad[m] * p.a[m];
        }
        out
    }
}

/// `[X, Y]`, evaluated lazily from the coefficients of `X` and `Y`.
pub fn op_commutator(x: &FirstOrderOp, y: &FirstOrderOp, mode: GradientMode) -> FirstOrderOp {
    let a = std::array::from_fn(|n| {
        let (x, y) = (x.clone(), y.clone());
        CoeffFn::new(move |q| {
            let ax = x.at(q).a;
            let ay = y.at(q).a;
            y.a[n].along(q, &ax, mode) - x.a[n].along(q, &ay, mode)
        })
    });
    let (x2, y2) = (x.clone(), y.clone());
    let b = CoeffFn::new(move |q| {
        let px = x2.at(q);
        let py = y2.at(q);
        let transport = y2.b.along(q, &px.a, mode) - x2.b.along(q, &py.a, mode);
        transport + &px.b * &py.b - &py.b * &px.b
    });
    FirstOrderOp { dim: x.dim, a, b }
}
