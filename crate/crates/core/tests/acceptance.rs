//! Acceptance criteria. Runs as a plain binary so every criterion prints
//! its own PASS/FAIL line; exits non-zero if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use semistiff::annulus::{dirichlet_energy, hopf_constant_check, winding_degree_adaptive, AnnulusGrid, FieldSampler};
use semistiff::bifurcate::{
    boundary_cover_check, branch_switch, kernel_mode, mean_curvature, newton_solve, nonsymmetry_metric,
    random_perturbation, trivial_noise_floor,
};
use semistiff::holo::{argument_principle_count, build_solution, make_zero_set};
use semistiff::lift::{
    conformality_residual, lift_catenoid_type, lift_helicoid_type, plane_symmetry_check, CatenoidHeight,
    HelicoidHeight,
};
use semistiff::radial::{steklov_compatibility, threshold_rho_prime, Kind, RadialSolution};
use semistiff::spectrum::{bifurcation_instant, mu2_positive_check, radial_spectrum, transversality};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(err: semistiff::Error) -> String {
    err.to_string()
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Root of `x tanh x = 1` by plain bisection, kept apart from the library.
fn x_tanh_x_root() -> f64 {
    let (mut a, mut b) = (1.0f64, 1.5f64);
    while b - a > 1e-15 {
        let m = 0.5 * (a + b);
        if m * m.tanh() > 1.0 {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

fn c1_energies() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut slowest: f64 = 0.0;
    for p in 1..=3 {
        for rho in [0.3f64, 0.5, 0.7] {
            let clock = Instant::now();
            let grid = AnnulusGrid::new(rho, 401, 256).map_err(e)?;
            let u = RadialSolution::new(p, rho, Kind::Catenoidal).map_err(e)?.field();
            let got = dirichlet_energy(&u, &grid);
            let rp = rho.powi(p);
            let want = 2.0 * PI * p as f64 * (1.0 - rp) / (1.0 + rp);
            let rel = (got - want).abs() / want;
            let secs = clock.elapsed().as_secs_f64();
            ensure(rel < 1e-6, || format!("p={p} rho={rho}: rel err {rel:.2e}"))?;
            ensure(secs < 5.0, || format!("p={p} rho={rho}: {secs:.1}s"))?;
            worst = worst.max(rel);
            slowest = slowest.max(secs);
        }
    }
    Ok(format!("max rel err {worst:.1e}, slowest case {slowest:.2}s"))
}

fn c2_threshold() -> Outcome {
    let r2 = threshold_rho_prime(2).map_err(e)?;
    let err = (r2 - (2f64.sqrt() - 1.0)).abs();
    ensure(err < 1e-10, || format!("rho'_2 off by {err:.2e}"))?;
    let mut prev = r2;
    for p in 3..=8 {
        let r = threshold_rho_prime(p).map_err(e)?;
        ensure(r > prev, || format!("rho'_{p} = {r} not above {prev}"))?;
        prev = r;
    }
    Ok(format!("rho'_2 - (sqrt2 - 1) = {err:.1e}, rho'_2..rho'_8 increasing"))
}

fn c3_holomorphic() -> Outcome {
    let clock = Instant::now();
    let mut worst_energy: f64 = 0.0;
    let mut worst_modulus: f64 = 0.0;
    for (p, q) in [(1, -1), (2, -1), (2, -2)] {
        for rho in [0.3, 0.5] {
            let u = build_solution(make_zero_set(p, q, rho, &[]).map_err(e)?, 1e-14).map_err(e)?;
            let dev = u.boundary_modulus_deviation(4096);
            ensure(dev < 1e-8, || format!("({p},{q}) rho={rho}: modulus dev {dev:.2e}"))?;
            let outer = winding_degree_adaptive(|t| u.value(1.0, t), 64).map_err(e)?;
            let inner = winding_degree_adaptive(|t| u.value(rho, t), 64).map_err(e)?;
            ensure((outer, inner) == (p as i64, q as i64), || format!("degrees ({outer},{inner}) for ({p},{q})"))?;
            let zeros = argument_principle_count(&u, rho, 1.0, 64).map_err(e)?;
            ensure(zeros == (p - q) as i64, || format!("({p},{q}) rho={rho}: {zeros} zeros"))?;
            let grid = AnnulusGrid::new(rho, 401, 256).map_err(e)?;
            let energy = dirichlet_energy(&u, &grid);
            let want = PI * (p + q.abs()) as f64;
            let rel = (energy - want).abs() / want;
            ensure(rel < 1e-4, || format!("({p},{q}) rho={rho}: energy rel err {rel:.2e}"))?;
            worst_energy = worst_energy.max(rel);
            worst_modulus = worst_modulus.max(dev);
        }
    }
    let secs = clock.elapsed().as_secs_f64();
    ensure(secs < 30.0, || format!("took {secs:.1}s"))?;
    Ok(format!("modulus dev {worst_modulus:.1e}, energy rel err {worst_energy:.1e}, {secs:.2}s"))
}

fn c4_hopf() -> Outcome {
    let mut worst_imag: f64 = 0.0;
    let mut worst_c: f64 = 0.0;
    for p in 1..=3 {
        for rho in [0.3f64, 0.5, 0.7] {
            let grid = AnnulusGrid::new(rho, 201, 128).map_err(e)?;
            let rp = rho.powi(p);
            let p2 = (p * p) as f64;
            for (kind, want) in [
                (Kind::Catenoidal, -p2 * rp / (1.0 + rp).powi(2)),
                (Kind::Helicoidal, p2 * rp / (1.0 - rp).powi(2)),
            ] {
                let u = RadialSolution::new(p, rho, kind).map_err(e)?.field();
                let rep = hopf_constant_check(&u, &grid);
                let dc = (rep.c_estimate - want).abs();
                ensure(rep.max_imag_part < 1e-8, || format!("{kind} p={p} rho={rho}: imag {:.2e}", rep.max_imag_part))?;
                ensure(dc < 1e-6, || format!("{kind} p={p} rho={rho}: c off by {dc:.2e}"))?;
                worst_imag = worst_imag.max(rep.max_imag_part);
                worst_c = worst_c.max(dc);
            }
        }
    }
    Ok(format!("max imag {worst_imag:.1e}, max |c - oracle| {worst_c:.1e}"))
}

fn c5_spectrum_limits() -> Outcome {
    let mut gaps = Vec::new();
    for p in 1..=3 {
        let t = 8.0 / p as f64;
        let s = radial_spectrum(p, t, 1, 4001).map_err(e)?;
        let gap = s.mus[0] + (p * p) as f64;
        ensure(gap < 1e-3 && gap > -1e-9, || format!("p={p}: mu_1 + p^2 = {gap:.3e}"))?;
        gaps.push(gap);
        let mut prev = f64::INFINITY;
        for k in 0..20 {
            let t = (0.2 + 7.8 * k as f64 / 19.0) / p as f64;
            let mu = radial_spectrum(p, t, 1, 2001).map_err(e)?.mus[0];
            ensure(mu < prev, || format!("p={p}: mu_1 not decreasing at t={t}"))?;
            prev = mu;
        }
    }
    Ok(format!("mu_1(8/p) + p^2 = {:.1e}, {:.1e}, {:.1e}; ladders decreasing", gaps[0], gaps[1], gaps[2]))
}

fn c6_instants() -> Outcome {
    let x = x_tanh_x_root();
    let mut worst: f64 = 0.0;
    for p in 1..=3 {
        let t0 = bifurcation_instant(p, 0, 1e-12).map_err(e)?;
        let err = (p as f64 * t0 - x).abs();
        ensure(err < 1e-5, || format!("p={p}: p t_0 off by {err:.2e}"))?;
        worst = worst.max(err);
    }
    let t1 = bifurcation_instant(2, 1, 1e-12).map_err(e)?;
    let s = radial_spectrum(2, t1, 2, 4001).map_err(e)?;
    let r1 = (s.mus[0] + 1.0).abs();
    ensure(r1 < 1e-6, || format!("|mu_1(t_1) + 1| = {r1:.2e}"))?;
    ensure(s.mus[1] > 0.0 && mu2_positive_check(2, t1).map_err(e)?, || format!("mu_2(t_1) = {}", s.mus[1]))?;
    ensure(bifurcation_instant(1, 1, 1e-10).is_err(), || "t_1 reported for p = 1".into())?;
    Ok(format!("max |p t_0 - x*| {worst:.1e}, t_1 = {t1:.10}, |mu_1 + 1| {r1:.1e}, mu_2 = {:.4}", s.mus[1]))
}

fn c7_transversality() -> Outcome {
    let t1 = bifurcation_instant(2, 1, 1e-12).map_err(e)?;
    let mut ds = Vec::new();
    for dt in [1e-3, 5e-4, 2.5e-4] {
        let d = transversality(2, t1, dt).map_err(e)?;
        ensure(d < 0.0, || format!("dt={dt}: derivative {d}"))?;
        ds.push(d);
    }
    Ok(format!("dlambda_2/dt = {:.6} / {:.6} / {:.6}", ds[0], ds[1], ds[2]))
}

fn c8_branch() -> Outcome {
    let clock = Instant::now();
    let (n_r, nt, amp) = (129, 128, 1e-2);
    let st = branch_switch(2, amp, 1e-10, n_r, nt).map_err(e)?;
    let h = sup(&mean_curvature(&st.u).map_err(e)?);
    ensure(h < 1e-6, || format!("sup|H| = {h:.2e}"))?;
    let t1 = bifurcation_instant(2, 1, 1e-12).map_err(e)?;
    let u1 = kernel_mode(2, t1, n_r, nt).map_err(e)?;
    let a = st.u.inner(st.u.values(), u1.values());
    ensure((a - amp).abs() < 1e-10, || format!("<u, u_1> = {a}"))?;
    let floor = trivial_noise_floor(2, st.t, n_r, nt).map_err(e)?;
    let ns = nonsymmetry_metric(&st);
    ensure(ns.variance > 10.0 * floor, || format!("nonsymmetry {:.2e} vs floor {floor:.2e}", ns.variance))?;
    ensure(ns.both_signs(), || format!("u(0, .) in [{}, {}]", ns.u_min, ns.u_max))?;
    let cover = boundary_cover_check(&st);
    ensure(cover.pass, || format!("{cover:?}"))?;
    let secs = clock.elapsed().as_secs_f64();
    ensure(secs < 300.0, || format!("took {secs:.0}s"))?;
    Ok(format!(
        "t = {:.8}, sup|H| {h:.1e}, nonsymmetry {:.2e} (floor {floor:.1e}), u(0,.) in [{:.4}, {:.4}], {secs:.1}s",
        st.t, ns.variance, ns.u_min, ns.u_max
    ))
}

fn c9_negative_control() -> Outcome {
    let x = x_tanh_x_root();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    let ratios = [0.5, 0.7, 0.85, 1.15, 1.3, 1.6, 1.9, 2.2, 2.6, 3.0];
    for r in ratios {
        let t = r * x;
        for trial in 0..20 {
            let g = random_perturbation(1, t, 33, 32, 1e-3, &mut rng).map_err(e)?;
            let u = newton_solve(&g, 1e-12, 30).map_err(|err| format!("t={t:.4} trial {trial}: {err}"))?;
            let n = u.l2_norm();
            ensure(n < 1e-8, || format!("t={t:.4} trial {trial}: |u| = {n:.2e}"))?;
            worst = worst.max(n);
        }
    }
    Ok(format!("200 solves, max |u| {worst:.1e}"))
}

fn c10_steklov() -> Outcome {
    let rho = 0.5;
    let grid = AnnulusGrid::new(rho, 11, 128).map_err(e)?;
    let (mut on_max, mut off_min) = (0.0f64, f64::INFINITY);
    for p in 1..=3 {
        for q in 1..=3 {
            for alpha in [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0)] {
                let v = steklov_compatibility(p, q, alpha, rho, &grid).map_err(e)?;
                if p == q && alpha.im == 0.0 {
                    ensure(v < 1e-8, || format!("p=q={p} alpha={alpha}: {v:.2e}"))?;
                    on_max = on_max.max(v);
                } else {
                    ensure(v > 1e-2, || format!("p={p} q={q} alpha={alpha}: {v:.2e}"))?;
                    off_min = off_min.min(v);
                }
            }
        }
    }
    Ok(format!("on the set <= {on_max:.1e}, off the set >= {off_min:.2e}"))
}

fn c11_lift() -> Outcome {
    let rho = 0.5;
    let mut worst: f64 = 0.0;
    for (n_r, nt) in [(41, 64), (81, 128), (161, 256)] {
        let grid = AnnulusGrid::new(rho, n_r, nt).map_err(e)?;
        let u = RadialSolution::new(1, rho, Kind::Catenoidal).map_err(e)?.field();
        let c = u_hopf(&u, &grid);
        lift_catenoid_type(&u, &grid).map_err(e)?;
        let r1 = conformality_residual(&u, &CatenoidHeight(c), &grid);
        let ut = RadialSolution::new(1, rho, Kind::Helicoidal).map_err(e)?.field();
        let ct = u_hopf(&ut, &grid);
        lift_helicoid_type(&ut, &grid).map_err(e)?;
        let r2 = conformality_residual(&ut, &HelicoidHeight(ct), &grid);
        ensure(r1 < 1e-6 && r2 < 1e-6, || format!("{n_r}x{nt}: residuals {r1:.2e}, {r2:.2e}"))?;
        worst = worst.max(r1).max(r2);
    }
    let grid = AnnulusGrid::new(rho, 81, 128).map_err(e)?;
    let mut sym_ratio: f64 = 0.0;
    for p in 1..=3 {
        let u = RadialSolution::new(p, rho, Kind::Catenoidal).map_err(e)?.field();
        let mesh = lift_catenoid_type(&u, &grid).map_err(e)?;
        let c = mesh.meta.c.expect("catenoid lift carries c");
        let d = plane_symmetry_check(&mesh, c.abs().sqrt() * rho.ln());
        let res = mesh.resolution();
        ensure(d < res, || format!("p={p}: symmetry distance {d:.2e} vs resolution {res:.2e}"))?;
        sym_ratio = sym_ratio.max(d / res);
    }
    Ok(format!("conformality residual <= {worst:.1e}, symmetry distance <= {sym_ratio:.1e} x resolution"))
}

/// Hopf constant estimated from the field itself.
fn u_hopf<F: FieldSampler>(u: &F, grid: &AnnulusGrid) -> f64 {
    hopf_constant_check(u, grid).c_estimate
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("closed-form energies", c1_energies),
        ("uniqueness threshold", c2_threshold),
        ("holomorphic minimizers", c3_holomorphic),
        ("Hopf constancy", c4_hopf),
        ("spectrum limits", c5_spectrum_limits),
        ("bifurcation instants", c6_instants),
        ("transversality", c7_transversality),
        ("branch existence", c8_branch),
        ("negative control p = 1", c9_negative_control),
        ("Steklov classification", c10_steklov),
        ("lift conformality", c11_lift),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
