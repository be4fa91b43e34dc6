use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use plshadow::plmap::spec::{AnyMap, MapSpec};
use plshadow::plmap::{golden_restriction, two_sided_at, IntervalMap, PLMap, Power, SmoothKind, SmoothMap1D};
use plshadow::scalar::Scalar;
use plshadow::shadow::{
    asymptotic_orbit, chain_connect, circle_slimit_failure_demo, halving_schedule, has_linking,
    limit_shadow_via_projection, modulus_estimate, shadow_set, side_invariance, slimit_trace, two_sided_depth,
    ChainOutcome, Ladders, LinkingVerdict, PseudoOrbit, SLimitConfig, TraceCertificate,
};
use plshadow::symbolic::{
    ict_chain, ladder_omega, ladder_shadow, random_ladder_pseudo_orbit, random_pseudo_orbit, walters_delta,
    walters_shadow, LadderPoint, Level, SftSpec, SymSeq,
};

use crate::report::{Failure, InputContext, Report, Undecided};
use crate::{Command, Mode};

type Outcome = Result<Report, Failure>;

fn scalar(s: &str, what: &str) -> Result<Scalar, Failure> {
    if s.trim() == "golden" {
        return Ok(Scalar::golden());
    }
    s.parse::<Scalar>().input(what)
}

fn scalar_list(s: &str, what: &str) -> Result<Vec<Scalar>, Failure> {
    s.split(',').map(|t| scalar(t, what)).collect()
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).input(&path.display().to_string())
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).input(&path.display().to_string())
}

fn build(spec: &MapSpec, mode: Mode, prec: u32) -> Result<AnyMap, Failure> {
    if mode == Mode::Exact && spec.is_smooth() {
        return Err(Failure::Input(
            "circle maps involve transcendental functions and have no exact evaluation; use --mode enclosure".into(),
        ));
    }
    let m = spec.build(prec).input("map")?;
    if mode == Mode::Exact {
        if let AnyMap::Pl(p) = &m {
            if !p.is_exact() {
                return Err(Failure::Input(format!(
                    "map {spec} has enclosure-valued breakpoints; use --mode enclosure"
                )));
            }
        }
    }
    Ok(m)
}

fn parse_map(text: &str) -> Result<MapSpec, Failure> {
    MapSpec::parse(text).input("map")
}

fn pl(spec: &MapSpec, mode: Mode, prec: u32) -> Result<PLMap, Failure> {
    match build(spec, mode, prec)? {
        AnyMap::Pl(m) => Ok(m),
        AnyMap::Smooth(_) => Err(Failure::Input(format!("{spec} is not piecewise linear"))),
    }
}

fn need_seed(seed: Option<u64>, cmd: &str) -> Result<u64, Failure> {
    seed.ok_or_else(|| Failure::Input(format!("{cmd} draws random samples and needs --seed")))
}

pub fn run(cmd: &Command, mode: Mode, prec: u32) -> Outcome {
    match cmd {
        Command::Linking { map, ladder, m_max } => linking(map, ladder, *m_max, mode, prec),
        Command::ShadowSet { map, po, eps } => shadow_set_cmd(map.as_deref(), po, eps, mode, prec),
        Command::Modulus { map, eps, len, trials, max_exponent, seed } => {
            let spec = parse_map(map)?;
            let m = pl(&spec, mode, prec)?;
            let eps = scalar(eps, "eps")?;
            let est = modulus_estimate(&m, &eps, *len, *trials, *max_exponent, *seed).undecided()?;
            let r = Report::new().kv("map", &spec).kv("eps", &eps).kv("samples_per_level", est.samples_per_level);
            Ok(match (est.delta, est.exponent) {
                (Some(d), Some(j)) => r.kv("delta", d).kv("exponent", j).kv("verdict", "estimate"),
                _ => r.kv("delta", "none").kv("verdict", "no dyadic level passed").inconclusive(true),
            })
        }
        Command::SlimitTrace { map, eps, po, x0, len, seed, n_max, out } => {
            slimit(map, eps, po.as_deref(), x0, *len, *seed, *n_max, out.as_deref(), mode, prec)
        }
        Command::Chain {
            map,
            from,
            to,
            delta,
            resolution,
            power,
            auto_depth,
            side_orbits,
            side_steps,
            max_prec,
            seed,
            out,
        } => chain(ChainArgs {
            map,
            from,
            to,
            delta,
            resolution: resolution.as_deref(),
            power: *power,
            auto_depth: *auto_depth,
            side_orbits: *side_orbits,
            side_steps: *side_steps,
            max_prec: *max_prec,
            seed: *seed,
            out: out.as_deref(),
            mode,
            prec,
        }),
        Command::SftShadow { sft, ladder_k, po, delta, eps, len, seed, out } => {
            sft_shadow(sft.as_deref(), *ladder_k, po.as_deref(), delta.as_deref(), eps, *len, *seed, out.as_deref())
        }
        Command::LadderDemo { eps, samples, len, chain_prefix, seed } => {
            ladder_demo(eps, *samples, *len, *chain_prefix, *seed)
        }
        Command::CircleDemo { delta, horizon, grid } => {
            if mode == Mode::Exact {
                return Err(Failure::Input("the circle demo needs --mode enclosure".into()));
            }
            let delta = scalar(delta, "delta")?;
            let r = circle_slimit_failure_demo(&delta, *horizon, *grid).undecided()?;
            let mut rep = Report::new();
            for line in r.to_text().lines() {
                rep.push("", line);
            }
            Ok(rep.inconclusive(!r.holds))
        }
        Command::Omega { point } => {
            let mut r = Report::new();
            for p in point {
                let p: LadderPoint = p.parse().input("point")?;
                let om = ladder_omega(&p);
                r.push("point", &p);
                r.push("omega_size", om.len());
                for q in om {
                    r.push("omega", q);
                }
            }
            Ok(r)
        }
        Command::Verify { file, map } => verify(file, map.as_deref(), mode, prec),
        Command::FigureData { figure, map, samples, depth } => {
            figure_data(*figure, map.as_deref(), *samples, *depth, mode, prec)
        }
    }
}

fn linking(map: &str, ladder: &str, m_max: usize, mode: Mode, prec: u32) -> Outcome {
    let spec = parse_map(map)?;
    let m = pl(&spec, mode, prec)?;
    let ladder = scalar_list(ladder, "ladder")?;
    let rep = has_linking(&m, &ladder, m_max).undecided()?;
    let mut r = Report::new().kv("map", &spec).kv("verdict", rep.verdict.label());
    if let LinkingVerdict::No { point, eps } = &rep.verdict {
        r.push("unlinked_critical_point", point);
        r.push("at_eps", eps);
    }
    for n in &rep.notes {
        r.push("note", n);
    }
    Ok(r.inconclusive(rep.verdict == LinkingVerdict::Undecided))
}

fn shadow_set_cmd(map: Option<&str>, po: &Path, eps: &str, mode: Mode, prec: u32) -> Outcome {
    let (file_map, po) = PseudoOrbit::from_text(&read(po)?).input("pseudo-orbit file")?;
    let spec = parse_map(map.or(file_map.as_deref()).ok_or_else(|| Failure::Input("no map given".into()))?)?;
    let m = pl(&spec, mode, prec)?;
    let eps = scalar(eps, "eps")?;
    let valid = po.verify(&m).undecided()?;
    let set = shadow_set(&m, &po, &eps).undecided()?;
    let mut r = Report::new()
        .kv("map", &spec)
        .kv("eps", &eps)
        .kv("pseudo_orbit_valid", valid)
        .kv("set", &set)
        .kv("components", set.len())
        .kv("nonempty", !set.is_empty());
    if !set.is_empty() {
        r.push("measure", set.measure());
    }
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn slimit(
    map: &str,
    eps: &str,
    po: Option<&Path>,
    x0: &str,
    len: usize,
    seed: Option<u64>,
    n_max: usize,
    out: Option<&Path>,
    mode: Mode,
    prec: u32,
) -> Outcome {
    let spec = parse_map(map)?;
    let eps = scalar(eps, "eps")?;
    let m = pl(&spec, mode, prec)?;
    let projected = spec == MapSpec::GoldenRestriction;
    let traced = if projected { plshadow::plmap::golden_core() } else { m.clone() };
    let cfg = SLimitConfig::for_map(&traced, n_max).input("map")?;
    let lad = Ladders::new(&eps, traced.constant_slope().unwrap(), &cfg).input("eps")?;
    let po = match po {
        Some(p) => PseudoOrbit::from_text(&read(p)?).input("pseudo-orbit file")?.1,
        None => {
            let seed = need_seed(seed, "slimit-trace")?;
            let x0 = scalar(x0, "x0")?;
            let schedule = halving_schedule(&lad.delta(0), len);
            asymptotic_orbit(&m, &x0, len, &schedule, seed).input("x0")?
        }
    };
    let mut r = Report::new().kv("map", &spec).kv("eps", &eps).kv("points", po.len()).kv("delta0", lad.delta(0));
    let mut cert = if projected {
        let rep = limit_shadow_via_projection(&po, &eps, n_max).undecided()?;
        r.push("tail_start", rep.tail_start);
        r.push("z", &rep.z);
        r.push("projection_verified", rep.verified);
        if !rep.verified {
            r = r.inconclusive(true);
        }
        rep.certificate
    } else {
        let c = slimit_trace(&m, &po, &eps, &cfg).undecided()?;
        r.push("z", &c.z);
        c
    };
    cert.map_spec = Some(if projected { MapSpec::GoldenCore.to_json() } else { spec.to_json() });
    let ok = cert.verify(&traced).is_ok();
    r.push("covered", cert.covered());
    r.push("max_level", cert.max_level());
    r.push("degenerate", cert.degenerate());
    r.push("final_bound", cert.bounds.last().map(ToString::to_string).unwrap_or_default());
    r.push("certificate_valid", ok);
    if let Some(p) = out {
        write(p, &cert.to_text())?;
        r.push("certificate", p.display());
    }
    Ok(r.inconclusive(!ok))
}

struct ChainArgs<'a> {
    map: &'a str,
    from: &'a str,
    to: &'a str,
    delta: &'a str,
    resolution: Option<&'a str>,
    power: usize,
    auto_depth: bool,
    side_orbits: usize,
    side_steps: usize,
    max_prec: u32,
    seed: Option<u64>,
    out: Option<&'a Path>,
    mode: Mode,
    prec: u32,
}

fn chain(a: ChainArgs) -> Outcome {
    let mut spec = parse_map(a.map)?;
    let delta = scalar(a.delta, "delta")?;
    if a.auto_depth {
        if !matches!(spec, MapSpec::TwoSided(_)) {
            return Err(Failure::Input("--auto-depth applies to two-sided maps".into()));
        }
        spec = MapSpec::TwoSided(two_sided_depth(&delta, 64).undecided()?);
    }
    if a.power == 0 {
        return Err(Failure::Input("--power must be at least 1".into()));
    }
    let any = build(&spec, a.mode, a.prec)?;
    let base = any.as_interval_map();
    let m = Power { map: base, n: a.power };
    let from = scalar(a.from, "from")?;
    let to = scalar(a.to, "to")?;
    let resolution = match a.resolution {
        Some(r) => scalar(r, "resolution")?,
        None => {
            let cells = (2.0 * (m.lipschitz() + 1.0) / delta.to_f64()).ceil() as i64;
            Scalar::ratio(1, cells.max(1))
        }
    };
    let mut r = Report::new().kv("map", &spec).kv("power", a.power).kv("delta", &delta).kv("resolution", &resolution);
    let outcome = chain_connect(&m, &from, &to, &delta, &resolution).input("chain")?;
    let mut inconclusive = false;
    match outcome {
        ChainOutcome::Found(po) => {
            r.push("found", true);
            r.push("steps", po.len() - 1);
            r.push("crosses_origin", po.points.iter().any(|p| p.signum() == Some(1)) && po.points.iter().any(|p| p.signum() == Some(-1)));
            for p in &po.points {
                r.push("point", format!("{:.12}", p.to_f64()));
            }
            if let Some(path) = a.out {
                let text = format!("# power: {}\n{}", a.power, po.to_text(&spec.to_json()));
                write(path, &text)?;
                r.push("certificate", path.display());
            }
        }
        ChainOutcome::NotFound { cells } => {
            r.push("found", false);
            r.push("cells", cells);
            r.push("note", "no chain at this resolution; this does not prove that none exists");
            inconclusive = true;
        }
    }
    if a.side_orbits > 0 {
        let seed = need_seed(a.seed, "the side check")?;
        let MapSpec::TwoSided(depth) = spec else {
            return Err(Failure::Input("the side check applies to two-sided maps".into()));
        };
        let rep = side_invariance(&|p| two_sided_at(depth, p), a.power, a.side_orbits, a.side_steps, seed, a.max_prec)
            .undecided()?;
        r.push("side_orbits", rep.orbits);
        r.push("side_steps", rep.steps);
        r.push("sign_changes", rep.sign_changes);
        r.push("unresolved", rep.unresolved);
        r.push("max_precision", rep.precision);
        inconclusive |= rep.unresolved > 0;
    }
    Ok(r.inconclusive(inconclusive))
}

fn load_sft(sft: Option<&Path>, ladder_k: Option<usize>) -> Result<SftSpec, Failure> {
    match (sft, ladder_k) {
        (Some(p), _) => read(p)?.parse().input("sft file"),
        (None, Some(k)) => Ok(SftSpec::ladder(k)),
        (None, None) => Err(Failure::Input("give --sft or --ladder-k".into())),
    }
}

fn sft_certificate(s: &SftSpec, delta: &Scalar, po: &[SymSeq], z: &SymSeq) -> String {
    let mut t = format!("certificate: sft-shadow\n{s}delta: {delta}\nz: {z}\n");
    for x in po {
        t += &format!("point: {x}\n");
    }
    t
}

#[allow(clippy::too_many_arguments)]
fn sft_shadow(
    sft: Option<&Path>,
    ladder_k: Option<usize>,
    po: Option<&Path>,
    delta: Option<&str>,
    eps: &str,
    len: usize,
    seed: Option<u64>,
    out: Option<&Path>,
) -> Outcome {
    let s = load_sft(sft, ladder_k)?;
    let delta = match delta {
        Some(d) => scalar(d, "delta")?,
        None => walters_delta(&s, &scalar(eps, "eps")?),
    };
    let points: Vec<SymSeq> = match po {
        Some(p) => read(p)?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.parse().input("sequence"))
            .collect::<Result<_, _>>()?,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(need_seed(seed, "a random sft-shadow run")?);
            random_pseudo_orbit(&s, &delta, len, &mut rng).input("delta")?
        }
    };
    let cert = walters_shadow(&s, &points, &delta).input("pseudo-orbit")?;
    let mut r = Report::new()
        .kv("alphabet", s.alphabet())
        .kv("memory", s.memory())
        .kv("delta", &delta)
        .kv("points", points.len())
        .kv("z", &cert.z)
        .kv("in_space", s.contains(&cert.z))
        .kv("max_dist", &cert.max_dist);
    if let Some(p) = out {
        write(p, &sft_certificate(&s, &delta, &points, &cert.z))?;
        r.push("certificate", p.display());
    }
    Ok(r)
}

fn ladder_demo(eps: &str, samples: usize, len: usize, chain_prefix: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = Report::new();
    let mut all_ok = true;
    for eps in scalar_list(eps, "eps")? {
        let (mut case1, mut case2, mut failures) = (0usize, 0usize, 0usize);
        let mut worst = Scalar::zero();
        for _ in 0..samples {
            let po = random_ladder_pseudo_orbit(&eps, len, &mut rng).input("eps")?;
            match ladder_shadow(&po, &eps) {
                Ok(s) => {
                    if s.case == 1 {
                        case1 += 1;
                    } else {
                        case2 += 1;
                    }
                    if worst.certainly_le(&s.max_dist) {
                        worst = s.max_dist;
                    }
                }
                Err(_) => failures += 1,
            }
        }
        all_ok &= failures == 0;
        r.push("eps", &eps);
        r.push("  case1", case1);
        r.push("  case2", case2);
        r.push("  failures", failures);
        r.push("  max_dist", worst);
    }
    let delta = Scalar::pow2(-10);
    let mut pts = vec![SymSeq::zeros()];
    pts.extend((0..chain_prefix).map(SymSeq::single_one));
    let (mut pairs, mut bad) = (0usize, 0usize);
    for x in &pts {
        for y in &pts {
            pairs += 1;
            if ict_chain(x, y, &delta).is_err() {
                bad += 1;
            }
        }
    }
    all_ok &= bad == 0;
    r.push("chain_pairs", pairs);
    r.push("chain_failures", bad);
    let singleton = pts
        .iter()
        .all(|x| ladder_omega(&LadderPoint { level: Level::Infinite, seq: x.clone() }).len() == 1);
    let a = LadderPoint { level: Level::Infinite, seq: SymSeq::zeros() };
    let b = LadderPoint { level: Level::Infinite, seq: SymSeq::single_one(0) };
    let diameter = a.dist(&b);
    let separated = singleton && Scalar::ratio(1, 2).certainly_le(&diameter);
    all_ok &= separated;
    r.push("omega_singletons", singleton);
    r.push("ict_diameter_lower_bound", diameter);
    r.push("separation", separated);
    Ok(r.kv("verdict", if all_ok { "all checks passed" } else { "some checks failed" }).inconclusive(!all_ok))
}

fn verify(file: &Path, map: Option<&str>, mode: Mode, prec: u32) -> Outcome {
    let text = read(file)?;
    let first = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    let (kind, result): (&str, Result<(), String>) = if first == "certificate: slimit-trace" {
        let cert = TraceCertificate::from_text(&text).input("certificate")?;
        let spec = parse_map(cert.map_spec.as_deref().or(map).ok_or_else(|| Failure::Input("no map given".into()))?)?;
        let m = pl(&spec, mode, prec)?;
        ("slimit-trace", cert.verify(&m).map_err(|e| e.to_string()))
    } else if first == "certificate: sft-shadow" {
        ("sft-shadow", verify_sft(&text)?)
    } else {
        let power = text
            .lines()
            .find_map(|l| l.trim().strip_prefix("# power:"))
            .map(|p| p.trim().parse::<usize>().input("power"))
            .transpose()?
            .unwrap_or(1);
        let (file_map, po) = PseudoOrbit::from_text(&text).input("pseudo-orbit file")?;
        let spec = parse_map(file_map.as_deref().or(map).ok_or_else(|| Failure::Input("no map given".into()))?)?;
        let any = build(&spec, mode, prec)?;
        let m = Power { map: any.as_interval_map(), n: power };
        let res = match po.first_violation(&m).undecided()? {
            None => Ok(()),
            Some(i) => Err(format!("step {i} exceeds its bound")),
        };
        ("pseudo-orbit", res)
    };
    let mut r = Report::new().kv("kind", kind).kv("valid", result.is_ok());
    if let Err(e) = &result {
        r.push("reason", e);
    }
    Ok(r.inconclusive(result.is_err()))
}

fn verify_sft(text: &str) -> Result<Result<(), String>, Failure> {
    let mut spec_lines = String::new();
    let mut delta = None;
    let mut z = None;
    let mut points = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()).skip(1) {
        let (k, v) = line.split_once(':').ok_or_else(|| Failure::Input(format!("bad line {line:?}")))?;
        match k {
            "alphabet" | "forbidden" => spec_lines += &format!("{line}\n"),
            "delta" => delta = Some(scalar(v.trim(), "delta")?),
            "z" => z = Some(v.trim().parse::<SymSeq>().input("z")?),
            "point" => points.push(v.trim().parse::<SymSeq>().input("point")?),
            _ => return Err(Failure::Input(format!("unknown key {k:?}"))),
        }
    }
    let s: SftSpec = spec_lines.parse().input("sft")?;
    let delta = delta.ok_or_else(|| Failure::Input("missing delta".into()))?;
    let z = z.ok_or_else(|| Failure::Input("missing z".into()))?;
    if !s.contains(&z) {
        return Ok(Err("z is not in the space".into()));
    }
    for (i, w) in points.windows(2).enumerate() {
        if !w[0].shift().dist(&w[1]).certainly_le(&delta) {
            return Ok(Err(format!("step {i} is not a delta step")));
        }
    }
    for (i, x) in points.iter().enumerate() {
        if !z.shift_by(i).dist(x).certainly_le(&delta) {
            return Ok(Err(format!("z leaves the delta-ball at index {i}")));
        }
    }
    Ok(Ok(()))
}

fn sample_curve(m: &dyn IntervalMap, extra: &[Scalar], samples: usize) -> Result<Vec<(f64, f64)>, Failure> {
    let (lo, hi) = m.domain();
    let span = &hi - &lo;
    let mut xs: Vec<Scalar> =
        (0..=samples).map(|i| &lo + &(&span * &Scalar::ratio(i as i64, samples.max(1) as i64))).collect();
    xs.extend(extra.iter().cloned());
    let mut pts: Vec<(f64, f64)> = xs
        .iter()
        .map(|x| Ok((x.to_f64(), m.eval(x).input("sample")?.to_f64())))
        .collect::<Result<_, Failure>>()?;
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts.dedup_by(|a, b| a.0 == b.0);
    Ok(pts)
}

fn push_curve(r: &mut Report, name: &str, pts: &[(f64, f64)]) {
    r.push("", format!("# curve: {name}"));
    for (x, y) in pts {
        r.push("", format!("{x:.10} {y:.10}"));
    }
    r.push("", "");
}

fn figure_data(figure: Option<u8>, map: Option<&str>, samples: usize, depth: usize, mode: Mode, prec: u32) -> Outcome {
    let mut r = Report::new();
    let pl_curve = |r: &mut Report, name: &str, m: &PLMap| -> Result<(), Failure> {
        let pts = sample_curve(m, m.points(), samples)?;
        push_curve(r, name, &pts);
        Ok(())
    };
    match (figure, map) {
        (_, Some(text)) => {
            let spec = parse_map(text)?;
            match build(&spec, mode, prec)? {
                AnyMap::Pl(m) => pl_curve(&mut r, &spec.to_json(), &m)?,
                AnyMap::Smooth(m) => push_curve(&mut r, &spec.to_json(), &sample_curve(&m, &[], samples)?),
            }
        }
        (Some(1), None) => {
            let t = plshadow::plmap::make_tent(&Scalar::golden()).input("map")?;
            pl_curve(&mut r, "tent:golden", &t)?;
            pl_curve(&mut r, "golden-restriction", &golden_restriction())?;
        }
        (Some(2), None) => {
            pl_curve(&mut r, "nucleus:depth=0", &pl(&MapSpec::Nucleus(0), mode, prec)?)?;
            pl_curve(&mut r, &format!("nucleus:depth={depth}"), &pl(&MapSpec::Nucleus(depth), mode, prec)?)?;
        }
        (Some(3), None) => {
            if mode == Mode::Exact {
                return Err(Failure::Input("circle maps need --mode enclosure".into()));
            }
            for (tag, kind) in [("a", SmoothKind::Cube), ("b", SmoothKind::PiecewiseCubic), ("c", SmoothKind::LogOscillation)] {
                let m = SmoothMap1D::with_prec(kind, prec);
                push_curve(&mut r, &format!("circle:{tag}"), &sample_curve(&m, &[], samples)?);
            }
        }
        _ => return Err(Failure::Input("give --figure 1|2|3 or --map".into())),
    }
    Ok(r)
}
