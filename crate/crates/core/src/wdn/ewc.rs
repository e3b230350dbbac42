use nalgebra::DMatrix;

use super::network::{HydraulicParams, NetworkModel, OperatingPoint};
use crate::error::{Error, Result};
use crate::pattern::RealMatrix;

/// Default RK4 step in seconds.
pub const DEFAULT_STEP: f64 = 1e-3;

fn params(net: &NetworkModel) -> Result<&HydraulicParams> {
    net.params().ok_or(Error::MissingParameter("params"))
}

/// Diagonal of `F = diag{½|A_inc| C_l + C_n}`.
fn node_capacitance(net: &NetworkModel, p: &HydraulicParams) -> Vec<f64> {
    let mut f = p.cn.clone();
    for (k, e) in net.edges().iter().enumerate() {
        f[e.tail] += 0.5 * p.cl[k];
        f[e.head] += 0.5 * p.cl[k];
    }
    f
}

fn check_state(net: &NetworkModel, x: &[f64]) -> Result<()> {
    let n = net.state_count();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            context: "ewc state vector",
            expected: (n, 1),
            found: (x.len(), 1),
        });
    }
    Ok(())
}

/// Right-hand side of the elastic water column model at `x = (q, h)`.
///
/// Flow block: `-L⁻¹R diag{|q|} q + L⁻¹ A_incᵀ h`.
/// Head block: `F⁻¹ (A_inc q - Q - D √h)`.
pub fn ewc_rhs(net: &NetworkModel, x: &[f64]) -> Result<Vec<f64>> {
    let p = params(net)?;
    check_state(net, x)?;
    let m = net.edge_count();
    let (q, h) = x.split_at(m);
    if let Some((i, &v)) = h.iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
        return Err(Error::NonPositiveState {
            index: m + i,
            value: v,
        });
    }

    let f = node_capacitance(net, p);
    let mut out = vec![0.0; x.len()];
    let mut net_inflow = vec![0.0; h.len()];
    for (k, e) in net.edges().iter().enumerate() {
        let head_drive = h[e.head] - h[e.tail];
        out[k] = (-p.r[k] * q[k].abs() * q[k] + head_drive) / p.l[k];
        net_inflow[e.head] += q[k];
        net_inflow[e.tail] -= q[k];
    }
    for i in 0..h.len() {
        out[m + i] = (net_inflow[i] - p.q[i] - p.d[i] * h[i].sqrt()) / f[i];
    }
    Ok(out)
}

/// Analytic Jacobian of [`ewc_rhs`] at an operating point in the positive orthant.
pub fn linearize(net: &NetworkModel, xo: &OperatingPoint) -> Result<RealMatrix> {
    let p = params(net)?;
    xo.validate(net.node_count(), net.edge_count())?;
    let m = net.edge_count();
    let n = net.state_count();
    let f = node_capacitance(net, p);
    let mut a = DMatrix::zeros(n, n);

    for (k, e) in net.edges().iter().enumerate() {
        let q = xo.q[k];
        a[(k, k)] = -p.r[k] / p.l[k] * (2.0 * q * q / q.abs());
        // L⁻¹ A_incᵀ
        a[(k, m + e.tail)] = -1.0 / p.l[k];
        a[(k, m + e.head)] = 1.0 / p.l[k];
        // F⁻¹ A_inc
        a[(m + e.tail, k)] = -1.0 / f[e.tail];
        a[(m + e.head, k)] = 1.0 / f[e.head];
    }
    for (i, &h) in xo.h.iter().enumerate() {
        a[(m + i, m + i)] = -p.d[i] / f[i] / (2.0 * h.sqrt());
    }
    RealMatrix::new(a)
}

/// Sampled trajectory; `states[k]` is the state at `times[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    /// CSV with header `t,q1..qm,h1..hn`.
    pub fn to_csv(&self, edges: usize) -> String {
        let width = self.states.first().map_or(0, Vec::len);
        let mut header = vec!["t".to_string()];
        header.extend((1..=edges).map(|k| format!("q{k}")));
        header.extend((1..=width.saturating_sub(edges)).map(|i| format!("h{i}")));
        let mut out = header.join(",");
        out.push('\n');
        for (t, x) in self.times.iter().zip(&self.states) {
            out.push_str(&format!("{t}"));
            for v in x {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Fixed-step classical Runge-Kutta integration of the EWC model.
pub fn simulate_rk4(net: &NetworkModel, x0: &[f64], dt: f64, steps: usize) -> Result<Trajectory> {
    check_state(net, x0)?;
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter {
            name: "dt",
            msg: format!("step must be positive, got {dt}"),
        });
    }
    let axpy = |x: &[f64], k: &[f64], s: f64| -> Vec<f64> {
        x.iter().zip(k).map(|(a, b)| a + s * b).collect()
    };
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut x = x0.to_vec();
    times.push(0.0);
    states.push(x.clone());
    for step in 1..=steps {
        let k1 = ewc_rhs(net, &x)?;
        let k2 = ewc_rhs(net, &axpy(&x, &k1, dt / 2.0))?;
        let k3 = ewc_rhs(net, &axpy(&x, &k2, dt / 2.0))?;
        let k4 = ewc_rhs(net, &axpy(&x, &k3, dt))?;
        for i in 0..x.len() {
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        times.push(step as f64 * dt);
        states.push(x.clone());
    }
    Ok(Trajectory { times, states })
}

/// Returns `base` with `R` and `Q` replaced so that `xo` is an equilibrium.
///
/// Requires `h_head > h_tail` on every pipe, since `R` must stay positive.
pub fn balance_at(net: &NetworkModel, xo: &OperatingPoint, base: &HydraulicParams) -> Result<HydraulicParams> {
    base.validate(net.node_count(), net.edge_count())?;
    xo.validate(net.node_count(), net.edge_count())?;
    let mut p = base.clone();
    let mut net_inflow = vec![0.0; net.node_count()];
    for (k, e) in net.edges().iter().enumerate() {
        let drive = xo.h[e.head] - xo.h[e.tail];
        if drive <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "R",
                msg: format!("pipe {} has no positive head drive at the operating point", e.id),
            });
        }
        p.r[k] = drive / (xo.q[k] * xo.q[k]);
        net_inflow[e.head] += xo.q[k];
        net_inflow[e.tail] -= xo.q[k];
    }
    for i in 0..net.node_count() {
        p.q[i] = net_inflow[i] - p.d[i] * xo.h[i].sqrt();
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::pattern::pattern_membership;
    use crate::wdn::derive_wdn_pattern;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn single_pipe() -> NetworkModel {
        NetworkModel::from_edges(2, &[(0, 1)])
            .unwrap()
            .with_params(HydraulicParams::unit(2, 1))
            .unwrap()
    }

    fn random_params(rng: &mut impl Rng, nodes: usize, edges: usize) -> HydraulicParams {
        let mut pos = |k: usize| (0..k).map(|_| rng.random_range(0.2..5.0)).collect::<Vec<f64>>();
        HydraulicParams {
            l: pos(edges),
            r: pos(edges),
            d: pos(nodes),
            cl: pos(edges),
            cn: pos(nodes),
            q: pos(nodes),
        }
    }

    /// Central-difference Jacobian, independent of [`linearize`].
    fn fd_jacobian(net: &NetworkModel, x: &[f64]) -> DMatrix<f64> {
        let n = x.len();
        let mut jac = DMatrix::zeros(n, n);
        for j in 0..n {
            let step = 1e-6 * x[j].abs().max(1.0);
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[j] += step;
            xm[j] -= step;
            let fp = ewc_rhs(net, &xp).unwrap();
            let fm = ewc_rhs(net, &xm).unwrap();
            for i in 0..n {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * step);
            }
        }
        jac
    }

    #[test]
    fn single_pipe_flow_derivative() {
        let f = ewc_rhs(&single_pipe(), &[1.0, 2.0, 1.0]).unwrap();
        // -R|q|q/L + (h_head - h_tail)/L = -1 + (1 - 2)
        assert_relative_eq!(f[0], -2.0);
    }

    #[test]
    fn doubling_inductance_halves_flow_block() {
        let net = single_pipe();
        let mut p = net.params().unwrap().clone();
        let x = [0.7, 2.0, 1.5];
        let f1 = ewc_rhs(&net, &x).unwrap();
        p.l[0] *= 2.0;
        let f2 = ewc_rhs(&net.clone().with_params(p).unwrap(), &x).unwrap();
        assert_eq!(f2[0], f1[0] / 2.0);
        assert_eq!(f2[1..], f1[1..]);
    }

    #[test]
    fn rhs_requires_params_and_positive_heads() {
        let bare = NetworkModel::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(ewc_rhs(&bare, &[1.0, 1.0, 1.0]).unwrap_err().kind(), "missing_parameter");
        assert_eq!(
            ewc_rhs(&single_pipe(), &[1.0, 0.0, 1.0]).unwrap_err().kind(),
            "non_positive_state"
        );
    }

    #[test]
    fn balanced_point_is_equilibrium() {
        let net = fixtures::triangular_wdn();
        let xo = OperatingPoint::new(vec![0.3, 0.5, 0.2, 0.4], vec![3.0, 2.0, 1.0, 4.0]);
        let mut base = HydraulicParams::unit(4, 4);
        base.d = vec![0.1, 0.2, 0.3, 0.0];
        let p = balance_at(&net, &xo, &base).unwrap();
        let net = net.with_params(p).unwrap();
        for v in ewc_rhs(&net, &xo.to_state()).unwrap() {
            assert!(v.abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn top_left_block_is_twice_resistance_times_flow() {
        let net = single_pipe();
        let a = linearize(&net, &OperatingPoint::new(vec![0.8], vec![2.0, 1.0])).unwrap();
        assert_relative_eq!(a.get(0, 0), -2.0 * 0.8);
    }

    #[test]
    fn linearize_rejects_zero_flow() {
        let err = linearize(&single_pipe(), &OperatingPoint::new(vec![0.0], vec![2.0, 1.0])).unwrap_err();
        assert_eq!(err.kind(), "non_positive_state");
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let topo = fixtures::triangular_wdn();
        let pattern = derive_wdn_pattern(&topo).unwrap();
        for _ in 0..20 {
            let net = topo.clone().with_params(random_params(&mut rng, 4, 4)).unwrap();
            let q: Vec<f64> = (0..4).map(|_| rng.random_range(0.1..3.0)).collect();
            let h: Vec<f64> = (0..4).map(|_| rng.random_range(0.5..20.0)).collect();
            let xo = OperatingPoint::new(q, h);
            let a = linearize(&net, &xo).unwrap();
            let fd = fd_jacobian(&net, &xo.to_state());
            for i in 0..8 {
                for j in 0..8 {
                    let exact = a.get(i, j);
                    if exact.abs() > 1e-9 {
                        let rel = (fd[(i, j)] - exact).abs() / exact.abs();
                        assert!(rel <= 1e-5, "({i},{j}) {exact} vs {}", fd[(i, j)]);
                    } else {
                        assert!(fd[(i, j)].abs() < 1e-6);
                    }
                }
            }
            assert!(pattern_membership(&a, &pattern).unwrap());
        }
    }

    #[test]
    fn rk4_stays_at_equilibrium() {
        let topo = fixtures::triangular_wdn();
        let xo = OperatingPoint::new(vec![0.3, 0.5, 0.2, 0.4], vec![3.0, 2.0, 1.0, 4.0]);
        let p = balance_at(&topo, &xo, &HydraulicParams::unit(4, 4)).unwrap();
        let net = topo.with_params(p).unwrap();
        let traj = simulate_rk4(&net, &xo.to_state(), DEFAULT_STEP, 500).unwrap();
        assert_eq!(traj.states.len(), 501);
        for x in &traj.states {
            for (a, b) in x.iter().zip(xo.to_state()) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn rk4_small_perturbation_stays_positive() {
        let topo = fixtures::triangular_wdn();
        let xo = OperatingPoint::new(vec![0.3, 0.5, 0.2, 0.4], vec![3.0, 2.0, 1.0, 4.0]);
        let mut base = HydraulicParams::unit(4, 4);
        base.d = vec![0.5; 4];
        let p = balance_at(&topo, &xo, &base).unwrap();
        let net = topo.with_params(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let x0: Vec<f64> = xo.to_state().iter().map(|v| v * (1.0 + rng.random_range(-0.02..0.02))).collect();
            let traj = simulate_rk4(&net, &x0, DEFAULT_STEP, 2000).unwrap();
            assert!(traj.states.iter().flatten().all(|&v| v > 0.0));
        }
    }

    #[test]
    fn trajectory_csv_header() {
        let t = Trajectory {
            times: vec![0.0],
            states: vec![vec![1.0, 2.0, 3.0]],
        };
        assert_eq!(t.to_csv(1), "t,q1,h1,h2\n0,1,2,3\n");
    }
}
