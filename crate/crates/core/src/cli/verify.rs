use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::linalg::det;
use crate::algebra::{fmt_rational, int, rat, Monomial, Polynomial, Rational};
use crate::cusp::{eta, period_normalization, monomial_obstruction_check, FlatIndex, Triplet};
use crate::error::{Error, Result};
use crate::intersection::{intersection_form, reconstruct_from_intersection, round_trip_mismatches, verify_gamma_relation};
use crate::quotient::JacobianResidue;
use crate::series::FlatSeries;
use crate::wdvv::{default_normalization_monomial, Potential, ReconstructionConfig};
use crate::weyl::{cartan_matrix, expected_determinant, gram_check, ExtendedElement, ExtendedWeyl};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    All,
    Wdvv,
    Intersection,
    Residue,
    Weyl,
    Periods,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Wdvv => "wdvv",
            Suite::Intersection => "intersection",
            Suite::Residue => "residue",
            Suite::Weyl => "weyl",
            Suite::Periods => "periods",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub status: Status,
    pub detail: String,
    pub millis: u128,
}

pub struct VerifySettings {
    pub a: Triplet,
    pub cfg: ReconstructionConfig,
    pub seed: u64,
    /// Explicit s_mu for the residue suite; otherwise 1, 1/2 and 3.
    pub s_mu: Option<Rational>,
    pub points: usize,
}

pub struct VerifyReport {
    pub suite: Suite,
    pub settings: VerifySettings,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn to_json(&self) -> Value {
        let s = &self.settings;
        json!({
            "suite": self.suite.name(),
            "A": s.a,
            "config": {
                "K": s.cfg.k,
                "D": s.cfg.d,
                "seed": s.seed,
                "s_mu": s.s_mu.as_ref().map(fmt_rational),
                "points": s.points,
            },
            "checks": self.checks.iter().map(|c| json!({
                "suite": c.suite,
                "name": c.name,
                "status": c.status.as_str(),
                "detail": c.detail,
                "millis": c.millis,
            })).collect::<Vec<_>>(),
            "passed": self.passed(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            out.push_str(&format!("[{tag}] {}: {}", c.suite, c.name));
            if !c.detail.is_empty() {
                out.push_str(&format!(" ({})", c.detail));
            }
            out.push_str(&format!(" [{} ms]\n", c.millis));
        }
        let fails = self.checks.iter().filter(|c| c.status == Status::Fail).count();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), fails));
        out
    }
}

struct Recorder {
    suite: &'static str,
    checks: Vec<Check>,
    started: Instant,
}

impl Recorder {
    fn new(suite: &'static str) -> Self {
        Recorder { suite, checks: Vec::new(), started: Instant::now() }
    }

    fn push(&mut self, name: impl Into<String>, status: Status, detail: impl Into<String>) {
        let millis = self.started.elapsed().as_millis();
        self.checks.push(Check { suite: self.suite, name: name.into(), status, detail: detail.into(), millis });
        self.started = Instant::now();
    }

    fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.push(name, if ok { Status::Pass } else { Status::Fail }, detail);
    }
}

/// Runs one suite (or all of them). `potential` is called at most once.
pub fn run_verify(
    suite: Suite,
    settings: VerifySettings,
    potential: &mut dyn FnMut() -> Result<Potential>,
) -> VerifyReport {
    let mut checks = Vec::new();
    let want = |s: Suite| suite == Suite::All || suite == s;
    if want(Suite::Residue) {
        checks.extend(residue_suite(&settings));
    }
    if want(Suite::Periods) {
        checks.extend(periods_suite(&settings));
    }
    if want(Suite::Weyl) {
        checks.extend(weyl_suite(&settings));
    }
    if want(Suite::Wdvv) || want(Suite::Intersection) {
        let a = settings.a;
        let skip = if a.chi().is_zero() {
            Some("chi zero".to_string())
        } else if a.has_degenerate_arm().is_some() && settings.cfg.normalization.is_none() {
            Some(Error::DegenerateArm(a.has_degenerate_arm().unwrap_or(1)).to_string())
        } else {
            None
        };
        let mut rec = Recorder::new("wdvv");
        let solved = match skip {
            Some(reason) => {
                rec.push("solve", Status::Skipped, reason);
                None
            }
            None => match potential() {
                Ok(p) => {
                    let s = p.stats();
                    let detail = if s.unknowns == 0 {
                        "read from cache".to_string()
                    } else {
                        format!("{} unknowns, {} equations", s.unknowns, s.equations)
                    };
                    rec.check("solve", true, detail);
                    Some(p)
                }
                Err(e) => {
                    rec.check("solve", false, e.to_string());
                    None
                }
            },
        };
        if want(Suite::Wdvv) {
            if let Some(p) = &solved {
                wdvv_checks(&mut rec, p, &settings);
            }
        }
        // The solve line belongs to the wdvv suite, but an intersection-only
        // run still needs to say why nothing was checked.
        if want(Suite::Wdvv) || solved.is_none() {
            checks.extend(rec.checks);
        }
        if want(Suite::Intersection) {
            if let Some(p) = &solved {
                checks.extend(intersection_suite(p, &settings));
            }
        }
    }
    VerifyReport { suite, settings, checks }
}

fn residue_suite(s: &VerifySettings) -> Vec<Check> {
    let mut rec = Recorder::new("residue");
    let a = s.a;
    if let Some(i) = a.has_degenerate_arm() {
        rec.push("residues", Status::Skipped, format!("arm {i} is empty"));
        return rec.checks;
    }
    if a.chi() <= Rational::zero() {
        // The global Jacobian algebra then also sees critical points away
        // from the origin (dimension 12 for (2,3,7)).
        rec.push("residues", Status::Skipped, "stated for chi > 0 only");
        return rec.checks;
    }
    let values = match &s.s_mu {
        Some(v) => vec![v.clone()],
        None => vec![int(1), rat(1, 2), int(3)],
    };
    let mut constants = Vec::new();
    for smu in &values {
        let tag = fmt_rational(smu);
        let r = match JacobianResidue::for_cusp(a, smu) {
            Ok(r) => r,
            Err(e) => {
                rec.check(format!("residue functional at s_mu={tag}"), false, e.to_string());
                continue;
            }
        };
        rec.check(format!("dimension at s_mu={tag}"), r.dimension() == a.mu() as usize, format!("{}", r.dimension()));
        let mut bad = Vec::new();
        if !r.residue(&Polynomial::one()).is_zero() {
            bad.push("1".to_string());
        }
        for (i, j) in a.arm_indices() {
            let mut e = [0; 3];
            e[i as usize - 1] = j as i32;
            let m = Monomial::x(e);
            if !r.residue(&Polynomial::term(m.clone(), int(1))).is_zero() {
                bad.push(m.to_string());
            }
        }
        rec.check(format!("Res(1) = Res(x_i^j) = 0 at s_mu={tag}"), bad.is_empty(), bad.join(", "));
        let top = r.residue(&Polynomial::term(Monomial::x([1, 1, 1]), int(1)));
        let s3 = smu * smu * smu;
        let c = &top / &s3;
        rec.check(
            format!("Res(x1x2x3) = c*s_mu^3 at s_mu={tag}"),
            !c.is_zero(),
            format!("raw {}, c = {}", fmt_rational(&top), fmt_rational(&c)),
        );
        constants.push(c);
    }
    if !constants.is_empty() {
        let first = constants[0].clone();
        let same = constants.iter().all(|c| *c == first);
        rec.check("one global sign constant", same && first == int(-1), format!("c = {}", fmt_rational(&first)));
    }
    rec.checks
}

fn periods_suite(s: &VerifySettings) -> Vec<Check> {
    let mut rec = Recorder::new("periods");
    let a = s.a;
    let chi = a.chi();
    if chi.is_zero() {
        rec.push("normalization", Status::Skipped, "chi zero: no normalization statement");
        return rec.checks;
    }
    let order = if chi > Rational::zero() { 4 } else { 6 };
    let p = period_normalization(a, order);
    let detail = p
        .coefficients
        .iter()
        .enumerate()
        .find(|(n, c)| if *n == 0 { **c != Polynomial::one() } else { !c.is_zero() })
        .map(|(n, c)| format!("order {n}: {}", c.to_text()))
        .unwrap_or_default();
    rec.check(format!("constant-term series = 1 through order {order}"), p.is_identically_one(), detail);
    rec.check(format!("no matching monomial through order {order}"), monomial_obstruction_check(a, order), "");
    rec.checks
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into())).collect()
}

fn weyl_suite(s: &VerifySettings) -> Vec<Check> {
    let mut rec = Recorder::new("weyl");
    let a = s.a;
    let c = cartan_matrix(a);
    let n = c.size();
    let by_elimination = det(&c.matrix.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect());
    let bareiss = c.determinant();
    let expected = expected_determinant(a);
    rec.check(
        "det = a1*a2*a3*chi",
        bareiss == expected && Rational::from_integer(bareiss.clone()) == by_elimination,
        format!("{bareiss}"),
    );
    let symmetric = (0..n).all(|x| (0..n).all(|y| c.matrix[x][y] == c.matrix[y][x]));
    rec.check("symmetric with diagonal 2", symmetric && (0..n).all(|x| c.matrix[x][x] == 2), "");
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let vs: Vec<Vec<Rational>> = (0..20).map(|_| random_vec(&mut rng, n)).collect();
    let involution = (0..n).all(|i| vs.iter().all(|v| c.apply_word(&[i, i], v).as_deref() == Ok(&v[..])));
    rec.check("r_i r_i = id on 20 random vectors", involution, "");
    let mut braid_bad = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let m = if c.is_adjacent(i, j) { 3 } else { 2 };
            let word: Vec<usize> = (0..m).flat_map(|_| [i, j]).collect();
            if !vs.iter().take(5).all(|v| c.apply_word(&word, v).as_deref() == Ok(&v[..])) {
                braid_bad.push(format!("({},{})", c.labels[i], c.labels[j]));
            }
        }
    }
    rec.check("braid relations", braid_bad.is_empty(), braid_bad.join(" "));
    let preserved = (0..n).all(|i| {
        vs.chunks(2).all(|p| {
            let (ru, rv) = (c.simple_reflection(i, &p[0]).unwrap(), c.simple_reflection(i, &p[1]).unwrap());
            c.form(&ru, &rv) == c.form(&p[0], &p[1])
        })
    });
    rec.check("reflections preserve the Cartan form", preserved, "");
    match c.fundamental_coweights() {
        Err(e) => {
            rec.check("coweights", a.chi().is_zero() && e == Error::SingularCartan, e.to_string());
            return rec.checks;
        }
        Ok(w) => {
            let dual = (0..n).all(|i| (0..n).all(|j| c.root_pairing(i, &w[j]) == if i == j { int(1) } else { int(0) }));
            rec.check("<alpha_i, omega_j> = delta_ij", dual, "");
        }
    }
    match gram_check(a) {
        Ok(g) => rec.check("Gram block data", g.passed(), format!("corner {} x {}", fmt_rational(&g.data.corner), g.data.tag)),
        Err(e) => rec.check("Gram block data", false, e.to_string()),
    }
    if let Ok(g) = ExtendedWeyl::new(&c) {
        let mut law = true;
        for _ in 0..5 {
            let elem = |rng: &mut ChaCha8Rng| ExtendedElement {
                word: (0..rng.gen_range(0..6)).map(|_| rng.gen_range(0..n)).collect(),
                translation: (0..n).map(|_| rng.gen_range(-2..=2)).collect(),
                shift: rng.gen_range(-2..=2),
            };
            let (e1, e2) = (elem(&mut rng), elem(&mut rng));
            let h = random_vec(&mut rng, n);
            let x = Rational::new(rng.gen_range(-5i64..=5).into(), 2.into());
            let lhs = g.act(&e2, &h, &x).and_then(|(h2, x2)| g.act(&e1, &h2, &x2));
            let rhs = g.compose(&e1, &e2).and_then(|e| g.act(&e, &h, &x));
            law &= lhs.is_ok() && lhs == rhs;
        }
        let zero = vec![Rational::zero(); n];
        let shifted = g.act(&ExtendedElement::shift(n, 1), &zero, &int(0));
        rec.check("extended action group law", law, "");
        rec.check("shift m=1 maps (0, x) to (omega_1, x+1)", shifted == Ok((g.omega1().clone(), int(1))), "");
    }
    rec.checks
}

fn wdvv_checks(rec: &mut Recorder, p: &Potential, s: &VerifySettings) {
    let a = p.triplet();
    let (k, d) = p.truncation();
    if let Some(m) = default_normalization_monomial(a).filter(|_| s.cfg.normalization.is_none()) {
        let c = p.coefficient(&m);
        rec.check(format!("coefficient of {} = 1", m.display(a)), c == int(1), fmt_rational(&c));
    }
    let mut unit_bad = Vec::new();
    for x in a.flat_indices() {
        for y in a.flat_indices() {
            if p.three_point(FlatIndex::Unit, x, y) != FlatSeries::constant(a, k, d, eta(a, x, y)) {
                unit_bad.push(format!("({x},{y})"));
            }
        }
    }
    rec.check("d1 da db F = eta_ab", unit_bad.is_empty(), unit_bad.join(" "));
    let correction = p.correction();
    let off: Vec<String> =
        correction.terms().filter(|(m, _)| m.euler_degree(a) != int(2)).map(|(m, _)| m.display(a)).collect();
    rec.check("every correction monomial has Euler degree 2", off.is_empty(), off.join(" "));
    let mixed: Vec<String> = correction
        .terms()
        .filter(|(m, _)| m.q == 0 && m.arms_touched(a) > 1)
        .map(|(m, _)| m.display(a))
        .collect();
    rec.check("no k=0 mixed-arm terms", mixed.is_empty(), mixed.join(" "));
    match p.check_mixed_arms(k) {
        Ok(r) => rec.check(
            "mixed-arm k=0 coefficients forced to 0 without the restriction",
            r.passed(),
            format!("{} unknowns, {} nonzero, {} undetermined", r.checked, r.nonzero.len(), r.undetermined.len()),
        ),
        Err(e) => rec.check("mixed-arm k=0 coefficients forced to 0 without the restriction", false, e.to_string()),
    }
    let res = p.wdvv_residual();
    let detail = res
        .first()
        .map(|r| format!("{} terms; first {} at {}", res.len(), fmt_rational(&r.coefficient), r.monomial.display(a)))
        .unwrap_or_default();
    rec.check("WDVV residual empty", res.is_empty(), detail);
    let target = correction.terms().last().map(|(m, _)| m.clone());
    match target {
        Some(m) => {
            let broken = p.perturbed(&m, &int(1)).wdvv_residual();
            rec.check(
                format!("perturbing {} breaks WDVV", m.display(a)),
                !broken.is_empty(),
                format!("{} residual terms", broken.len()),
            );
        }
        None => rec.push("perturbation", Status::Skipped, "no correction terms"),
    }
}

fn intersection_suite(p: &Potential, s: &VerifySettings) -> Vec<Check> {
    let mut rec = Recorder::new("intersection");
    let g = intersection_form(p);
    let v = g.verify_flat_identities();
    let detail = v.first().map(|x| format!("{} at ({},{}): {}", x.identity, x.i, x.j, x.difference)).unwrap_or_default();
    rec.check("g^{mu,1}, g^{mu,(i,j)}, g^{mu,mu} identities and symmetry", v.is_empty(), detail);
    let points = g.regular_points(s.points, s.seed);
    rec.check(format!("{} regular sample points", s.points), points.len() == s.points, format!("{} found", points.len()));
    let mut failures = 0;
    let mut delta_failures = 0;
    let mut mu_nonzero = 0;
    let mut checked = 0;
    for pt in &points {
        match verify_gamma_relation(p, &g, pt) {
            Ok(r) => {
                failures += r.failures.len();
                delta_failures += r.delta_failures.len();
                mu_nonzero += r.mu_column.len();
                checked += r.checked;
            }
            Err(e) => {
                rec.check("Gamma^{ij}_k = d_j C^{ij}_k", false, e.to_string());
                return rec.checks;
            }
        }
    }
    rec.check(
        "Gamma^{ij}_k = d_j C^{ij}_k (unit and arm columns)",
        failures == 0 && !points.is_empty(),
        format!("{checked} entries, {failures} failed; mu column: {mu_nonzero} nonzero entries (reported only)"),
    );
    rec.check("C^{i,mu}_k = delta^i_k", delta_failures == 0 && !points.is_empty(), "");
    match reconstruct_from_intersection(&g, &points) {
        Ok(tables) => {
            let bad: usize = tables.iter().map(|t| round_trip_mismatches(p, t).len()).sum();
            rec.check("reconstruction from the intersection form round-trips", bad == 0, format!("{bad} mismatches"));
        }
        Err(e) => rec.check("reconstruction from the intersection form round-trips", false, e.to_string()),
    }
    rec.checks
}
