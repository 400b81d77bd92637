//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`). The process fails when a
//! criterion fails, unless every failing clause is listed in
//! `KNOWN_DEVIATIONS`; those are still printed as FAIL.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cmvkit::cmv::{
    build_cmv, build_extended, build_lm, cmv_basis_values, conjugate, conjugators, evolve, BandedUnitary, Boundary,
    CmvVariant,
};
use cmvkit::coefficients::{default_nodes, moments, verblunsky_from_moments, Builtin, CoefficientSchedule, MeasureSpec};
use cmvkit::gz::{gz_transfer, neighbor_table, propagate, verify_equivalence, Direction, GZState, SeedFamily};
use cmvkit::opuc::{
    cd_kernel, gram_schmidt_oracle, opuc_sequence, pairing_identity, values_at, KernelVariant, Variant,
};
use cmvkit::weyl::{rotation_invariance_check, weyl_residual, Verdict, WeylThresholds};
use cmvkit::C64;

/// Clauses expected to fail as stated: `(criterion, clause)`.
const KNOWN_DEVIATIONS: &[(u32, &str)] = &[(6, "det = -conj(rho)")];

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn frob(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).norm()
}

fn random_schedule(rng: &mut ChaCha8Rng, lo: i64, len: usize, max: f64) -> CoefficientSchedule {
    let alpha = (0..len).map(|_| C64::from_polar(rng.gen_range(0.0..max), rng.gen_range(-PI..PI))).collect();
    let zeta = (0..len).map(|_| C64::from_polar(1.0, rng.gen_range(-PI..PI))).collect();
    CoefficientSchedule::new(lo, alpha, zeta).unwrap()
}

fn random_point(rng: &mut ChaCha8Rng, max_modulus: f64) -> C64 {
    C64::from_polar(rng.gen_range(0.0..max_modulus), rng.gen_range(-PI..PI))
}

/// One measured clause of a criterion.
struct Clause {
    name: &'static str,
    value: f64,
    bound: f64,
    /// True when the clause requires `value >= bound` instead of `value < bound`.
    at_least: bool,
}

impl Clause {
    fn below(name: &'static str, value: f64, bound: f64) -> Self {
        Self { name, value, bound, at_least: false }
    }

    fn above(name: &'static str, value: f64, bound: f64) -> Self {
        Self { name, value, bound, at_least: true }
    }

    fn holds(&self) -> bool {
        if self.at_least {
            self.value >= self.bound
        } else {
            self.value < self.bound
        }
    }

    fn render(&self) -> String {
        let op = if self.at_least { ">=" } else { "<" };
        let mark = if self.holds() { "" } else { " FAILED" };
        format!("{} {:.3e} {op} {:.0e}{mark}", self.name, self.value, self.bound)
    }
}

fn flag(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

fn displayed_rotated() -> ([[C64; 5]; 5], [[C64; 5]; 5]) {
    let s = f64::sqrt;
    let w = c(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
    let wb = w.conj();
    let i = c(0.0, 1.0);
    let z = r(0.0);
    let rot = [
        [r(-0.5), -s(3.0) / 6.0 * w, s(6.0) / 3.0 * i, z, z],
        [s(3.0) / 2.0 * wb, r(-1.0 / 6.0), s(2.0) / 3.0 * w, z, z],
        [z, -s(2.0) / 6.0 * wb, r(-1.0 / 12.0), -s(15.0) / 20.0 * w, 3.0 * s(10.0) / 10.0 * i],
        [z, -s(30.0) / 6.0 * i, s(15.0) / 12.0 * wb, r(-1.0 / 20.0), s(6.0) / 10.0 * w],
        [z, z, z, -s(6.0) / 15.0 * wb, r(-1.0 / 30.0)],
    ];
    let alt = [
        [r(-0.5), s(3.0) / 2.0 * w, z, z, z],
        [-s(3.0) / 6.0 * wb, r(-1.0 / 6.0), -1.0 / (3.0 * s(2.0)) * w, s(30.0) / 6.0 * i, z],
        [-s(2.0) / s(3.0) * i, s(2.0) / 3.0 * wb, r(-1.0 / 12.0), s(15.0) / 12.0 * w, z],
        [z, z, -s(15.0) / 20.0 * wb, r(-1.0 / 20.0), -s(6.0) / 15.0 * w],
        [z, z, -3.0 * s(10.0) / 10.0 * i, s(6.0) / 10.0 * wb, r(-1.0 / 30.0)],
    ];
    (rot, alt)
}

fn block_error(m: &BandedUnitary, expected: &[[C64; 5]; 5]) -> f64 {
    let mut worst: f64 = 0.0;
    for (k, row) in expected.iter().enumerate() {
        for (l, &e) in row.iter().enumerate() {
            worst = worst.max((m.get(k as i64, l as i64) - e).norm());
        }
    }
    worst
}

fn worked_example() -> Vec<Clause> {
    let start = Instant::now();
    let s = Builtin::GeronimusMu.schedule(6, C64::from_polar(1.0, PI / 4.0)).unwrap();
    let rot = build_cmv(&s, 5, CmvVariant::ROTATED, Boundary::PrincipalTruncation).unwrap();
    let alt = build_cmv(&s, 5, CmvVariant::ALTERNATE_ROTATED, Boundary::PrincipalTruncation).unwrap();
    let elapsed = start.elapsed();
    let (e_rot, e_alt) = displayed_rotated();
    vec![
        Clause::below("max entry error", block_error(&rot, &e_rot).max(block_error(&alt, &e_alt)), 1e-12),
        Clause::below("runtime [s]", elapsed.as_secs_f64(), Duration::from_secs(1).as_secs_f64()),
    ]
}

fn verblunsky_extraction() -> Vec<Clause> {
    let m = moments(&MeasureSpec::Builtin(Builtin::GeronimusMu), 9, 512).unwrap();
    let alpha = verblunsky_from_moments(&m, 9).unwrap();
    let err = alpha.iter().enumerate().map(|(n, a)| (a + 1.0 / (n as f64 + 2.0)).norm()).fold(0.0, f64::max);
    vec![Clause::below("max |alpha_n + 1/(n+2)|, n <= 8", err, 1e-9)]
}

fn factorization() -> Vec<Clause> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut std_err, mut alt_err): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let s = random_schedule(&mut rng, 0, 64, 0.95);
        let (l, m) = build_lm(&s, 0, 63, true, Boundary::HalfLatticeClosed).unwrap();
        let c_rot = build_cmv(&s, 64, CmvVariant::ROTATED, Boundary::HalfLatticeClosed).unwrap();
        let c_alt = build_cmv(&s, 64, CmvVariant::ALTERNATE_ROTATED, Boundary::HalfLatticeClosed).unwrap();
        std_err = std_err.max(frob(c_rot.matrix(), &(l.matrix() * m.matrix())));
        alt_err = alt_err.max(frob(c_alt.matrix(), &(m.matrix() * l.matrix())));
    }
    vec![Clause::below("||C - LM||_F", std_err, 1e-13), Clause::below("||C~ - ML||_F", alt_err, 1e-13)]
}

fn conjugation() -> Vec<Clause> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut half, mut ext, mut q): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..20 {
        let s = random_schedule(&mut rng, -33, 66, 0.95);
        let h = s.relabel(0);
        let d = conjugators(&h, 0, 63).unwrap();
        let c_rot = build_cmv(&h, 64, CmvVariant::ROTATED, Boundary::HalfLatticeClosed).unwrap();
        let c_plain = build_cmv(&h.plain(), 64, CmvVariant::STANDARD, Boundary::HalfLatticeClosed).unwrap();
        half = half.max(frob(&conjugate(d.r(), c_rot.matrix()).unwrap(), c_plain.matrix()));
        let c_alt = build_cmv(&h, 64, CmvVariant::ALTERNATE_ROTATED, Boundary::HalfLatticeClosed).unwrap();
        q = q.max(frob(&conjugate(&d.q, c_alt.matrix()).unwrap(), &c_rot.matrix().transpose()));

        let de = conjugators(&s, -32, 31).unwrap();
        let e_rot = build_extended(&s, -32, 31, CmvVariant::ROTATED, Boundary::HalfLatticeClosed).unwrap();
        let e_plain = build_extended(&s.plain(), -32, 31, CmvVariant::STANDARD, Boundary::HalfLatticeClosed).unwrap();
        ext = ext.max(frob(&conjugate(&de.r_tilde, e_rot.matrix()).unwrap(), e_plain.matrix()));
        let e_alt = build_extended(&s, -32, 31, CmvVariant::ALTERNATE_ROTATED, Boundary::HalfLatticeClosed).unwrap();
        q = q.max(frob(&conjugate(&de.q, e_alt.matrix()).unwrap(), &e_rot.matrix().transpose()));
    }
    vec![
        Clause::below("R C R^-1 vs C(|rho|)", half, 1e-12),
        Clause::below("R~ E R~^-1 vs E(|rho|)", ext, 1e-12),
        Clause::below("Q-transpose", q, 1e-12),
    ]
}

fn identity_suite() -> Vec<Clause> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut cd, mut mixed, mut inv, mut pair): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    let mut samples = 0;
    while samples < 100 {
        let s = random_schedule(&mut rng, 0, 16, 0.95);
        let xi = random_point(&mut rng, 1.0);
        let z = random_point(&mut rng, 1.0);
        if (c(1.0, 0.0) - xi.conj() * z).norm() < 1e-3 {
            continue;
        }
        samples += 1;
        let n = rng.gen_range(0..15);
        for variant in [KernelVariant::Standard, KernelVariant::Rotated, KernelVariant::Mixed, KernelVariant::RotatedMixed] {
            let k = cd_kernel(&s, n, xi, z, variant).unwrap();
            let rel = k.residual() / k.sum.norm().max(1.0);
            match variant {
                KernelVariant::Standard | KernelVariant::Rotated => cd = cd.max(rel),
                KernelVariant::Mixed | KernelVariant::RotatedMixed => mixed = mixed.max(rel),
            }
        }
        for (rot, plain) in [(Variant::Rotated, Variant::Standard), (Variant::RotatedSecondKind, Variant::SecondKind)] {
            let a = values_at(&s, z, n + 1, rot).unwrap();
            let b = values_at(&s, z, n + 1, plain).unwrap();
            for (j, ((pr, qr), (pp, qp))) in a.iter().zip(&b).enumerate() {
                let ph = s.phase_product(j).unwrap();
                let scale = pp.norm().max(qp.norm()).max(1.0);
                inv = inv.max((pr - ph * pp).norm() / scale).max((qr - ph * qp).norm() / scale);
            }
        }
        let kr = cd_kernel(&s, n, xi, z, KernelVariant::Rotated).unwrap();
        let kp = cd_kernel(&s, n, xi, z, KernelVariant::Standard).unwrap();
        inv = inv.max((kr.sum - kp.sum).norm() / kp.sum.norm().max(1.0));
        for rotated in [false, true] {
            let p = pairing_identity(&s, n, z, rotated).unwrap();
            let (phi, phi_s) = values_at(&s, z, n, Variant::new(rotated, false)).unwrap()[n];
            let (psi, psi_s) = values_at(&s, z, n, Variant::new(rotated, true)).unwrap()[n];
            let scale = ((psi_s * phi).norm() + (phi_s * psi).norm()).max(1.0);
            pair = pair.max(p.residual() / scale);
        }
    }
    vec![
        Clause::below("CD", cd, 1e-10),
        Clause::below("mixed CD", mixed, 1e-10),
        Clause::below("rotation invariance", inv, 1e-10),
        Clause::below("pairing", pair, 1e-10),
    ]
}

fn table_cells(k: i64, fam: SeedFamily, s: &CoefficientSchedule, z: C64) -> [C64; 4] {
    let one = r(1.0);
    let a = s.alpha(k).unwrap();
    let ab = a.conj();
    let left = s.rho(k).unwrap().conj().inv();
    let b = s.alpha(k + 1).unwrap();
    let bb = b.conj();
    let right = s.rho(k + 1).unwrap().inv();
    let zi = z.inv();
    let (l, rr) = if k.rem_euclid(2) == 0 {
        match fam {
            SeedFamily::FPlus => (((one + a) * z, one + ab), (one - b * z, z - bb)),
            SeedFamily::PPlus => (((a - one) * z, one - ab), (-one - b * z, z + bb)),
            SeedFamily::FMinus => ((a - z, zi - ab), (-one - b, one + bb)),
            SeedFamily::PMinus => ((a + z, zi + ab), (one - b, one - bb)),
        }
    } else {
        match fam {
            SeedFamily::FPlus => ((one + ab, one + a), (z - bb, zi - b)),
            SeedFamily::PPlus => ((one - ab, a - one), (z + bb, -zi - b)),
            SeedFamily::FMinus => ((one - ab * z, a - z), ((one + bb) * z, -one - b)),
            SeedFamily::PMinus => ((one + ab * z, z + a), ((one - bb) * z, one - b)),
        }
    };
    [l.0 * left, l.1 * left, rr.0 * right, rr.1 * right]
}

fn transfer_suite() -> Vec<Clause> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut literal, mut corrected): (f64, f64) = (0.0, 0.0);
    let s = random_schedule(&mut rng, -20, 41, 0.95);
    for n in -20..=20 {
        let z = C64::from_polar(rng.gen_range(0.2..2.0), rng.gen_range(-PI..PI));
        let det = gz_transfer(&s, n, z).unwrap().det();
        let rho = s.rho(n).unwrap();
        literal = literal.max((det + rho.conj()).norm());
        corrected = corrected.max((det + rho.conj() / rho).norm());
    }

    let mut cells: f64 = 0.0;
    let mut count = 0;
    for _ in 0..10 {
        for k in [-3i64, 4] {
            let sched = random_schedule(&mut rng, k - 2, 5, 0.95);
            let z = C64::from_polar(rng.gen_range(0.3..1.5), rng.gen_range(-PI..PI));
            for row in neighbor_table(&sched, k, z).unwrap() {
                let expected = table_cells(k, row.family, &sched, z);
                let got = [row.left.f, row.left.g, row.right.f, row.right.g];
                for (g, e) in got.iter().zip(expected) {
                    cells = cells.max((g - e).norm());
                    count += 1;
                }
            }
        }
    }
    assert_eq!(count, 10 * 32);

    let (mut clean, mut perturbed): (f64, f64) = (0.0, f64::INFINITY);
    for _ in 0..10 {
        let sched = random_schedule(&mut rng, -12, 40, 0.9);
        let z = C64::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(-PI..PI));
        let init = GZState { f: random_point(&mut rng, 1.0), g: random_point(&mut rng, 1.0), n: -12 };
        let seq = propagate(&sched, init, 36, z, Direction::Right).unwrap();
        let mut f: Vec<C64> = seq.iter().map(|st| st.f).collect();
        let g: Vec<C64> = seq.iter().map(|st| st.g).collect();
        let rep = verify_equivalence(&sched, &f, &g, -12, z, -9, 20).unwrap();
        clean = clean.max(rep.block().max(rep.recursion) / rep.scale.max(1.0));
        let i = rng.gen_range(5..30);
        f[i] += C64::from_polar(1e-2 * rep.scale.max(1.0), rng.gen_range(-PI..PI));
        let bad = verify_equivalence(&sched, &f, &g, -12, z, -9, 20).unwrap();
        perturbed = perturbed.min(bad.block().max(bad.recursion) / bad.scale.max(1.0));
    }
    vec![
        Clause::below("det = -conj(rho)", literal, 1e-13),
        Clause::below("det = -conj(rho)/rho", corrected, 1e-13),
        Clause::below("table cells", cells, 1e-13),
        Clause::below("equivalence residual", clean, 1e-11),
        Clause::above("perturbed residual", perturbed, 1e-4),
    ]
}

fn weyl_dichotomy() -> Vec<Clause> {
    let z = r(0.5);
    let nodes = 4096;
    let f_oracle: C64 = (0..nodes)
        .map(|j| {
            let t = -PI + 2.0 * PI * j as f64 / nodes as f64;
            let xi = C64::from_polar(1.0, t);
            (xi + z) / (xi - z) * (1.0 - t.cos())
        })
        .sum::<C64>()
        / nodes as f64;
    let s = Builtin::GeronimusMu.schedule(256, C64::from_polar(1.0, PI / 4.0)).unwrap();
    let t = WeylThresholds::default();
    let at_f = weyl_residual(&s, z, f_oracle, 256, t).unwrap();
    let off = weyl_residual(&s, z, r(0.6), 256, t).unwrap();
    let inv = rotation_invariance_check(&s, z, f_oracle, 256)
        .unwrap()
        .max_relative_difference
        .max(rotation_invariance_check(&s, c(0.3, 0.2), c(0.7, 0.1), 256).unwrap().max_relative_difference);
    let psi = values_at(&s, z, 256, Variant::RotatedSecondKind).unwrap();
    let bound = 1.0 - z.norm_sqr();
    let worst = psi.iter().map(|&(_, ps)| bound - ps.norm_sqr()).fold(f64::NEG_INFINITY, f64::max);
    vec![
        Clause::below("|F_quad(0.5) - 0.5|", (f_oracle - 0.5).norm(), 1e-12),
        Clause::below("r = F not square_summable", flag(at_f.verdict == Verdict::SquareSummable), 0.5),
        Clause::below("r = 0.6 not divergent", flag(off.verdict == Verdict::Divergent), 0.5),
        Clause::below("rotation invariance", inv, 1e-13),
        Clause::below("max (1-|z|^2) - |psi*_n|^2", worst.max(0.0), 1e-15),
    ]
}

fn oracle_equivalence() -> Vec<Clause> {
    let mut gs: f64 = 0.0;
    let mut quad: f64 = 0.0;
    for b in Builtin::ALL {
        let measure = MeasureSpec::Builtin(b);
        let m = moments(&measure, 16, default_nodes(16)).unwrap();
        let oracle = gram_schmidt_oracle(&m, 16).unwrap();
        let rec = opuc_sequence(&b.schedule(16, r(1.0)).unwrap(), 16, Variant::Standard).unwrap();
        for (o, p) in oracle.iter().zip(&rec) {
            gs = gs.max(o.max_abs_diff(&p.p));
        }
        let s = b.schedule(16, C64::from_polar(1.0, PI / 4.0)).unwrap();
        for variant in [CmvVariant::STANDARD, CmvVariant::ROTATED] {
            let op = build_cmv(&s, 16, variant, Boundary::PrincipalTruncation).unwrap();
            for k in 0..=10usize {
                for l in 0..=10usize {
                    let ip = measure
                        .integrate(512, |x| {
                            let chi = cmv_basis_values(&s, x, 11, variant.rotated).unwrap();
                            chi[k].conj() * x * chi[l]
                        })
                        .unwrap();
                    quad = quad.max((ip - op.get(k as i64, l as i64)).norm());
                }
            }
        }
    }
    vec![Clause::below("Gram-Schmidt vs Szego", gs, 1e-9), Clause::below("entries vs <chi_k, z chi_l>", quad, 1e-8)]
}

fn walk_sanity() -> Vec<Clause> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (lo, hi) = (-128i64, 127i64);
    let s = random_schedule(&mut rng, lo, 256, 0.95);
    let e = build_extended(&s, lo, hi, CmvVariant::ROTATED, Boundary::PeriodicClosed).unwrap();
    let raw: Vec<C64> = (0..256).map(|_| random_point(&mut rng, 1.0)).collect();
    let norm = raw.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let v: Vec<C64> = raw.iter().map(|x| x / norm).collect();
    let drift = evolve(&e, &v, 1000).unwrap().iter().map(|p| (p.iter().sum::<f64>() - 1.0).abs()).fold(0.0, f64::max);

    let k = 0i64;
    let cut = s.with_alpha(k, C64::from_polar(1.0, 0.4)).unwrap().with_alpha(hi, C64::from_polar(1.0, -1.1)).unwrap();
    let mut leak: f64 = 0.0;
    for boundary in [Boundary::PeriodicClosed, Boundary::HalfLatticeClosed] {
        let op = build_extended(&cut, lo, hi, CmvVariant::ROTATED, boundary).unwrap();
        let split = (k - lo + 1) as usize;
        let mut start = vec![c(0.0, 0.0); 256];
        for x in start.iter_mut().take(split) {
            *x = random_point(&mut rng, 1.0);
        }
        let n0 = start.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        start.iter_mut().for_each(|x| *x /= n0);
        for p in evolve(&op, &start, 1000).unwrap() {
            leak = leak.max(p[split..].iter().sum::<f64>());
        }
    }
    vec![Clause::below("norm drift over 1000 steps", drift, 1e-10), Clause::below("leakage across K", leak, 1e-14)]
}

type Criterion = (u32, &'static str, fn() -> Vec<Clause>);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "worked example", worked_example),
        (2, "Verblunsky extraction", verblunsky_extraction),
        (3, "LM factorization", factorization),
        (4, "unitary conjugation", conjugation),
        (5, "identity suite", identity_suite),
        (6, "transfer-matrix suite", transfer_suite),
        (7, "Weyl dichotomy", weyl_dichotomy),
        (8, "oracle equivalence", oracle_equivalence),
        (9, "walk sanity", walk_sanity),
    ];
    let mut passed = 0;
    let mut unexpected = Vec::new();
    for (id, label, run) in criteria {
        let clauses = run();
        let ok = clauses.iter().all(Clause::holds);
        let detail: Vec<String> = clauses.iter().map(Clause::render).collect();
        println!("[{}] criterion {id} {label}: {}", if ok { "PASS" } else { "FAIL" }, detail.join("; "));
        if ok {
            passed += 1;
        }
        for clause in clauses.iter().filter(|c| !c.holds()) {
            if !KNOWN_DEVIATIONS.contains(&(id, clause.name)) {
                unexpected.push(format!("{id}: {}", clause.name));
            }
        }
    }
    println!("{passed}/9 criteria passed");
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {}", unexpected.join(", "));
        ExitCode::FAILURE
    }
}
