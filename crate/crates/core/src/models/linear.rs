use serde::{Deserialize, Serialize};

use crate::error::{Diagnostics, Error, Result};
use crate::features::{LabeledDataset, SparseVector};
use crate::ingest::Label;
use crate::scalar::{pairwise_sum, sigmoid, softplus, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", tag = "type", rename_all = "lowercase")]
pub enum Regularization<F: Scalar> {
    /// `C * sum(loss) + w'w`
    L2 { c: F },
    /// `C * sum(loss) + lambda * |w|_1`
    L1 { c: F, lambda: F },
}

impl<F: Scalar> Regularization<F> {
    fn c(&self) -> F {
        match *self {
            Regularization::L2 { c } | Regularization::L1 { c, .. } => c,
        }
    }

    fn penalty(&self, w: &[F]) -> F {
        match *self {
            Regularization::L2 { .. } => w.iter().map(|&x| x * x).sum(),
            Regularization::L1 { lambda, .. } => lambda * w.iter().map(|x| x.abs()).sum::<F>(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SolverOptions<F: Scalar> {
    /// Stop when the gradient (L2) or KKT residual (L1) infinity-norm is at most this.
    pub tol: F,
    /// Cap on full coordinate passes.
    pub max_passes: usize,
    /// Learn an unregularized intercept.
    pub fit_bias: bool,
}

impl<F: Scalar> Default for SolverOptions<F> {
    fn default() -> Self {
        SolverOptions {
            tol: F::lit(1e-8),
            max_passes: 100_000,
            fit_bias: true,
        }
    }
}

/// Logistic-loss linear classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct LinearModel<F: Scalar> {
    pub weights: Vec<F>,
    pub bias: F,
    pub reg: Regularization<F>,
    pub diagnostics: Diagnostics,
    pub nnz: usize,
    pub vocab_hash: String,
}

impl<F: Scalar> LinearModel<F> {
    pub fn decision(&self, x: &SparseVector<F>) -> Result<F> {
        Ok(x.dot(&self.weights)? + self.bias)
    }

    /// Sign of `w'x + b`; zero predicts control.
    pub fn predict(&self, x: &SparseVector<F>) -> Result<(Label, F)> {
        let s = self.decision(x)?;
        Ok((if s > F::zero() { Label::Topic } else { Label::Control }, s))
    }
}

/// Column-major copy of a dataset with labels as ±1.
struct Columns<F> {
    cols: Vec<Vec<(usize, F)>>,
    col_max: Vec<F>,
    y: Vec<F>,
}

impl<F: Scalar> Columns<F> {
    fn new(ds: &LabeledDataset<F>) -> Result<Self> {
        let dim = ds.dim();
        let mut cols: Vec<Vec<(usize, F)>> = vec![Vec::new(); dim];
        for (j, x) in ds.vectors.iter().enumerate() {
            x.check_dim(dim)?;
            for &(i, v) in &x.entries {
                cols[i].push((j, v));
            }
        }
        let col_max = cols
            .iter()
            .map(|c| c.iter().fold(F::zero(), |m, &(_, v)| m.max(v.abs())))
            .collect();
        let y = ds.labels.iter().map(|l| F::lit(l.sign() as f64)).collect();
        Ok(Columns { cols, col_max, y })
    }
}

/// The training objective as a function of `(w, b)`, for testing and diagnostics.
pub struct LogisticObjective<'a, F: Scalar> {
    ds: &'a LabeledDataset<F>,
    reg: Regularization<F>,
}

impl<'a, F: Scalar> LogisticObjective<'a, F> {
    pub fn new(ds: &'a LabeledDataset<F>, reg: Regularization<F>) -> Self {
        LogisticObjective { ds, reg }
    }

    fn margins(&self, w: &[F], b: F) -> Result<Vec<F>> {
        self.ds
            .vectors
            .iter()
            .zip(&self.ds.labels)
            .map(|(x, l)| Ok(F::lit(l.sign() as f64) * (x.dot(w)? + b)))
            .collect()
    }

    /// `C * sum softplus(-y (w'x + b))`.
    pub fn loss(&self, w: &[F], b: F) -> Result<F> {
        let terms: Vec<F> = self.margins(w, b)?.into_iter().map(|m| softplus(-m)).collect();
        Ok(self.reg.c() * pairwise_sum(&terms))
    }

    pub fn value(&self, w: &[F], b: F) -> Result<F> {
        Ok(self.loss(w, b)? + self.reg.penalty(w))
    }

    /// Gradient of the loss term only, as `(d/dw, d/db)`.
    pub fn loss_gradient(&self, w: &[F], b: F) -> Result<(Vec<F>, F)> {
        let c = self.reg.c();
        let mut gw = vec![F::zero(); w.len()];
        let mut gb = F::zero();
        for ((x, l), m) in self.ds.vectors.iter().zip(&self.ds.labels).zip(self.margins(w, b)?) {
            let coef = -c * F::lit(l.sign() as f64) * sigmoid(-m);
            gb += coef;
            for &(i, v) in &x.entries {
                gw[i] += coef * v;
            }
        }
        Ok((gw, gb))
    }

    /// Full gradient of the L2 objective; for L1 this is the loss gradient.
    pub fn gradient(&self, w: &[F], b: F) -> Result<(Vec<F>, F)> {
        let (mut gw, gb) = self.loss_gradient(w, b)?;
        if let Regularization::L2 { .. } = self.reg {
            for (g, &wi) in gw.iter_mut().zip(w) {
                *g += wi + wi;
            }
        }
        Ok((gw, gb))
    }
}

/// Infinity-norm optimality residual at `(w, b)` given the loss gradient.
fn violation<F: Scalar>(reg: &Regularization<F>, w: &[F], gw: &[F], gb: Option<F>) -> F {
    let mut v = gb.map_or(F::zero(), F::abs);
    for (&wi, &g) in w.iter().zip(gw) {
        let r = match *reg {
            Regularization::L2 { .. } => (g + wi + wi).abs(),
            Regularization::L1 { lambda, .. } => {
                if wi > F::zero() {
                    (g + lambda).abs()
                } else if wi < F::zero() {
                    (g - lambda).abs()
                } else {
                    (g.abs() - lambda).max(F::zero())
                }
            }
        };
        v = v.max(r);
    }
    v
}

/// Primal coordinate descent with one Newton step per coordinate.
///
/// A step that moves every margin by at most `SAFE_MARGIN` is accepted
/// without a line search: along it the loss curvature stays within a factor
/// `e^0.1` of the value used for the step, which is enough for descent.
/// Longer steps are halved until they pass an Armijo test or become safe.
struct Solver<'a, F: Scalar> {
    data: &'a Columns<F>,
    reg: Regularization<F>,
    fit_bias: bool,
    w: Vec<F>,
    b: F,
    /// `y_j (w'x_j + b)`
    m: Vec<F>,
}

const SAFE_MARGIN: f64 = 0.1;
const ARMIJO: f64 = 0.01;

impl<F: Scalar> Solver<'_, F> {
    fn objective(&self) -> F {
        let terms: Vec<F> = self.m.iter().map(|&m| softplus(-m)).collect();
        self.reg.c() * pairwise_sum(&terms) + self.reg.penalty(&self.w)
    }

    /// Loss gradient and curvature along one column (`None` is the bias).
    fn grad_hess(&self, col: Option<usize>) -> (F, F) {
        let c = self.reg.c();
        let (mut g, mut h) = (F::zero(), F::zero());
        let mut add = |j: usize, v: F| {
            let p = sigmoid(-self.m[j]);
            g -= self.data.y[j] * p * v;
            h += p * (F::one() - p) * v * v;
        };
        match col {
            Some(i) => self.data.cols[i].iter().for_each(|&(j, v)| add(j, v)),
            None => (0..self.m.len()).for_each(|j| add(j, F::one())),
        }
        (c * g, c * h)
    }

    fn loss_delta(&self, col: Option<usize>, d: F) -> F {
        let mut terms = Vec::new();
        let mut push = |j: usize, v: F| {
            let m = self.m[j];
            terms.push(softplus(-(m + d * self.data.y[j] * v)) - softplus(-m));
        };
        match col {
            Some(i) => self.data.cols[i].iter().for_each(|&(j, v)| push(j, v)),
            None => (0..self.m.len()).for_each(|j| push(j, F::one())),
        }
        self.reg.c() * pairwise_sum(&terms)
    }

    fn apply(&mut self, col: Option<usize>, d: F) {
        match col {
            Some(i) => {
                for &(j, v) in &self.data.cols[i] {
                    self.m[j] += d * self.data.y[j] * v;
                }
                self.w[i] += d;
            }
            None => {
                for (m, &y) in self.m.iter_mut().zip(&self.data.y) {
                    *m += d * y;
                }
                self.b += d;
            }
        }
    }

    /// Change in the penalty when coordinate `col` moves from `wi` by `d`.
    fn penalty_delta(&self, col: Option<usize>, wi: F, d: F) -> F {
        match (col, self.reg) {
            (None, _) => F::zero(),
            (Some(_), Regularization::L2 { .. }) => (wi + d) * (wi + d) - wi * wi,
            (Some(_), Regularization::L1 { lambda, .. }) => lambda * ((wi + d).abs() - wi.abs()),
        }
    }

    fn update(&mut self, col: Option<usize>) {
        let (g, h) = self.grad_hess(col);
        let (wi, scale) = match col {
            Some(i) => (self.w[i], self.data.col_max[i]),
            None => (self.b, F::one()),
        };
        let two = F::lit(2.0);
        let d = match (col, self.reg) {
            (None, _) if h > F::zero() => -g / h,
            (None, _) => return,
            (Some(_), Regularization::L2 { .. }) => -(g + two * wi) / (h + two),
            (Some(_), Regularization::L1 { lambda, .. }) => {
                if h <= F::zero() {
                    // The loss is flat along this column.
                    if wi != F::zero() {
                        self.apply(col, -wi);
                    }
                    return;
                }
                if g + lambda <= h * wi {
                    -(g + lambda) / h
                } else if g - lambda >= h * wi {
                    -(g - lambda) / h
                } else {
                    -wi
                }
            }
        };
        if d == F::zero() || !d.is_finite() {
            return;
        }
        // Predicted first-order decrease for the Armijo test.
        let model = |step: F| match (col, self.reg) {
            (Some(_), Regularization::L1 { .. }) => g * step + self.penalty_delta(col, wi, step),
            (Some(_), Regularization::L2 { .. }) => (g + two * wi) * step,
            (None, _) => g * step,
        };
        let mut step = d;
        for _ in 0..60 {
            if step.abs() * scale <= F::lit(SAFE_MARGIN) {
                break;
            }
            let actual = self.loss_delta(col, step) + self.penalty_delta(col, wi, step);
            if actual <= F::lit(ARMIJO) * model(step) {
                break;
            }
            step *= F::lit(0.5);
        }
        self.apply(col, step);
    }

    fn full_violation(&self) -> F {
        let c = self.reg.c();
        let p: Vec<F> = self.m.iter().map(|&m| sigmoid(-m)).collect();
        let gw: Vec<F> = self
            .data
            .cols
            .iter()
            .map(|col| {
                let t: Vec<F> = col.iter().map(|&(j, v)| -self.data.y[j] * p[j] * v).collect();
                c * pairwise_sum(&t)
            })
            .collect();
        let gb = self.fit_bias.then(|| {
            let t: Vec<F> = p.iter().zip(&self.data.y).map(|(&p, &y)| -y * p).collect();
            c * pairwise_sum(&t)
        });
        violation(&self.reg, &self.w, &gw, gb)
    }

    /// One cyclic pass of single-coordinate updates.
    fn coordinate_pass(&mut self) {
        if self.fit_bias {
            self.update(None);
        }
        for i in 0..self.w.len() {
            self.update(Some(i));
        }
    }

    /// Proximal Newton step: coordinate descent on the quadratic model of the
    /// loss plus the exact penalty, then a backtracking line search.
    /// Returns false when no acceptable step was found.
    fn newton_step(&mut self, viol: F) -> bool {
        let c = self.reg.c();
        let n = self.m.len();
        let dim = self.w.len();
        let two = F::lit(2.0);
        let nu = F::lit(1e-12);
        let p: Vec<F> = self.m.iter().map(|&m| sigmoid(-m)).collect();
        let dd: Vec<F> = p.iter().map(|&p| c * p * (F::one() - p)).collect();
        let gw: Vec<F> = self
            .data
            .cols
            .iter()
            .map(|col| {
                let t: Vec<F> = col.iter().map(|&(j, v)| -self.data.y[j] * p[j] * v).collect();
                c * pairwise_sum(&t)
            })
            .collect();
        let gb = {
            let t: Vec<F> = p.iter().zip(&self.data.y).map(|(&p, &y)| -y * p).collect();
            c * pairwise_sum(&t)
        };
        let lambda = match self.reg {
            Regularization::L1 { lambda, .. } => Some(lambda),
            Regularization::L2 { .. } => None,
        };
        let slack = viol / F::lit(n as f64);
        let active: Vec<usize> = (0..dim)
            .filter(|&i| match lambda {
                Some(l) => self.w[i] != F::zero() || gw[i].abs() >= l - slack,
                None => true,
            })
            .collect();
        let hw: Vec<F> = (0..dim)
            .map(|i| self.data.cols[i].iter().fold(nu, |h, &(j, v)| h + dd[j] * v * v))
            .collect();
        let hb = dd.iter().fold(nu, |h, &d| h + d);

        let mut d = vec![F::zero(); dim];
        let mut db = F::zero();
        // u_j = x_j'd + db
        let mut u = vec![F::zero(); n];
        let inner_tol = viol * F::lit(0.1);
        for _ in 0..200 {
            let mut inner = F::zero();
            if self.fit_bias {
                let g = u.iter().zip(&dd).fold(gb, |g, (&u, &d)| g + d * u);
                inner = inner.max(g.abs());
                let step = -g / hb;
                db += step;
                u.iter_mut().for_each(|u| *u += step);
            }
            for &i in &active {
                let col = &self.data.cols[i];
                let mut g = col.iter().fold(gw[i], |g, &(j, v)| g + dd[j] * v * u[j]);
                let mut h = hw[i];
                let z = self.w[i] + d[i];
                let step = match lambda {
                    None => {
                        g += two * z;
                        h += two;
                        inner = inner.max(g.abs());
                        -g / h
                    }
                    Some(l) => {
                        let v = if z > F::zero() {
                            (g + l).abs()
                        } else if z < F::zero() {
                            (g - l).abs()
                        } else {
                            (g.abs() - l).max(F::zero())
                        };
                        inner = inner.max(v);
                        if g + l <= h * z {
                            -(g + l) / h
                        } else if g - l >= h * z {
                            -(g - l) / h
                        } else {
                            -z
                        }
                    }
                };
                if step != F::zero() && step.is_finite() {
                    d[i] += step;
                    for &(j, v) in col {
                        u[j] += step * v;
                    }
                }
            }
            if inner <= inner_tol {
                break;
            }
        }

        let new_w = |beta: F| -> Vec<F> { self.w.iter().zip(&d).map(|(&w, &d)| w + beta * d).collect() };
        let g_dot_d = gw.iter().zip(&d).fold(gb * db, |a, (&g, &d)| a + g * d);
        let decrease = g_dot_d + self.reg.penalty(&new_w(F::one())) - self.reg.penalty(&self.w);
        if decrease.is_nan() || decrease >= F::zero() {
            return false;
        }
        let f0 = self.objective();
        let max_u = u.iter().fold(F::zero(), |a, &u| a.max(u.abs()));
        let mut beta = F::one();
        for _ in 0..40 {
            let m: Vec<F> = self
                .m
                .iter()
                .zip(&u)
                .zip(&self.data.y)
                .map(|((&m, &u), &y)| m + beta * y * u)
                .collect();
            let w = new_w(beta);
            let terms: Vec<F> = m.iter().map(|&m| softplus(-m)).collect();
            let f = c * pairwise_sum(&terms) + self.reg.penalty(&w);
            // Small steps are inside the region where the model is accurate
            // and are taken even when rounding hides the decrease.
            let safe = beta == F::one() && max_u <= F::lit(SAFE_MARGIN) && f - f0 <= F::lit(1e-12) * f0.abs();
            if f - f0 <= F::lit(ARMIJO) * beta * decrease || safe {
                self.w = w;
                self.b += beta * db;
                self.m = m;
                return true;
            }
            beta *= F::lit(0.5);
        }
        false
    }

    fn run(&mut self, opts: &SolverOptions<F>) -> Result<Diagnostics> {
        let mut viol = self.full_violation();
        let mut passes = 0;
        while viol > opts.tol {
            if passes >= opts.max_passes {
                return Err(Error::NonConvergence(self.diagnostics(passes, viol)));
            }
            if !self.newton_step(viol) {
                self.coordinate_pass();
            }
            passes += 1;
            viol = self.full_violation();
            if !viol.is_finite() {
                return Err(Error::NonConvergence(self.diagnostics(passes, viol)));
            }
        }
        Ok(self.diagnostics(passes, viol))
    }

    fn diagnostics(&self, passes: usize, viol: F) -> Diagnostics {
        Diagnostics {
            final_objective: self.objective().to_f64_lossy(),
            iterations: passes,
            violation: viol.to_f64_lossy(),
        }
    }
}

fn check_training<F: Scalar>(ds: &LabeledDataset<F>, reg: &Regularization<F>, opts: &SolverOptions<F>) -> Result<()> {
    let c = reg.c();
    if !(c > F::zero() && c.is_finite()) {
        return Err(Error::Config(format!("C must be positive, got {c}")));
    }
    if let Regularization::L1 { lambda, .. } = reg {
        if !(*lambda > F::zero() && lambda.is_finite()) {
            return Err(Error::Config(format!("lambda must be positive, got {lambda}")));
        }
    }
    if opts.tol.is_nan() || opts.tol <= F::zero() {
        return Err(Error::Config("tolerance must be positive".into()));
    }
    if ds.labels.len() != ds.vectors.len() {
        return Err(Error::schema("labels", "vector and label counts differ"));
    }
    let n = ds.class_counts();
    if n[0] == 0 || n[1] == 0 {
        return Err(Error::DegenerateTraining("logistic regression needs both classes"));
    }
    Ok(())
}

/// Fits `reg` starting from `w = 0, b = 0`.
pub fn train_linear<F: Scalar>(
    ds: &LabeledDataset<F>,
    reg: Regularization<F>,
    opts: &SolverOptions<F>,
) -> Result<LinearModel<F>> {
    check_training(ds, &reg, opts)?;
    let data = Columns::new(ds)?;
    let mut s = Solver {
        data: &data,
        reg,
        fit_bias: opts.fit_bias,
        w: vec![F::zero(); ds.dim()],
        b: F::zero(),
        m: vec![F::zero(); ds.len()],
    };
    let diagnostics = s.run(opts)?;
    let nnz = s.w.iter().filter(|w| **w != F::zero()).count();
    Ok(LinearModel {
        weights: s.w,
        bias: s.b,
        reg,
        diagnostics,
        nnz,
        vocab_hash: ds.vocab.hash(),
    })
}

/// L2-regularized logistic regression with an intercept and at most 1e5 passes.
pub fn train_logreg<F: Scalar>(ds: &LabeledDataset<F>, c: F, tol: F) -> Result<LinearModel<F>> {
    let opts = SolverOptions {
        tol,
        ..SolverOptions::default()
    };
    train_linear(ds, Regularization::L2 { c }, &opts)
}

/// L1-regularized logistic regression with `C = 1`.
pub fn train_lasso<F: Scalar>(ds: &LabeledDataset<F>, lambda: F, tol: F) -> Result<LinearModel<F>> {
    let opts = SolverOptions {
        tol,
        ..SolverOptions::default()
    };
    train_linear(ds, Regularization::L1 { c: F::one(), lambda }, &opts)
}

/// Optimality residual of `model` on `ds`, recomputed from scratch.
pub fn kkt_violation<F: Scalar>(model: &LinearModel<F>, ds: &LabeledDataset<F>, fit_bias: bool) -> Result<F> {
    let obj = LogisticObjective::new(ds, model.reg);
    let (gw, gb) = obj.loss_gradient(&model.weights, model.bias)?;
    Ok(violation(&model.reg, &model.weights, &gw, fit_bias.then_some(gb)))
}
