use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use ait_thermo::compose::compose;
use ait_thermo::machines::spec::{parse_machine, render_machine};
use ait_thermo::machines::{
    builtin_by_name, check_discovered, check_predicates, complexity_upper, enumerate_domain,
    Checkpoint, EnumerationState, Machine, Presentation, Schedule,
};
use ait_thermo::randomness::{compression_profile, deficiency_probe, RealSource};
use ait_thermo::thermo::{detect_divergence, evaluate, partial_z, Quantity, ThermoReport, Zone};
use ait_thermo::{BitString, Error, LengthSpectrum, Precision, Temperature};
use num_rational::BigRational;
use rayon::prelude::*;

use crate::args::{Cli, Command, Global, Probe, ScheduleArg};
use crate::error::{CliError, CliResult};

/// Truncation length of the partial sum reported when convergence at
/// `T >= 1` is not certified.
const LOWER_BOUND_LENGTH: u32 = 256;

/// Significant digits of interval endpoints in text output.
const DIGITS: usize = 20;

pub fn run(cli: Cli, stdout: &mut dyn Write) -> CliResult<()> {
    let g = &cli.global;
    let text = match &cli.command {
        Command::Eval { machine, temp } => cmd_eval(g, machine, temp)?,
        Command::Sweep {
            machine,
            grid,
            quantities,
        } => cmd_sweep(g, machine, grid, quantities)?,
        Command::Compose { machines } => cmd_compose(machines)?,
        Command::Enumerate {
            machine,
            checkpoint,
            schedule,
        } => return cmd_enumerate(g, machine, checkpoint.as_deref(), *schedule, stdout),
        Command::Complexity {
            machine,
            target,
            real,
            n_max,
        } => cmd_complexity(g, machine, target.as_deref(), real.as_deref(), *n_max)?,
        Command::Probe { probe } => cmd_probe(g, probe)?,
    };
    emit(g.out.as_deref(), &text, stdout)
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn parse_precision(text: &str) -> CliResult<Precision> {
    let bad = || CliError::Usage(format!("--eps {text:?}: expected 2^-k, num/den or an integer"));
    if let Some(k) = text.trim().strip_prefix("2^-") {
        let k: u32 = k.parse().map_err(|_| bad())?;
        if k == 0 || k > 1 << 16 {
            return Err(bad());
        }
        return Ok(Precision::from_bits(k));
    }
    let r = parse_rational(text).map_err(|_| bad())?;
    Ok(Precision::from_rational(&r)?)
}

fn parse_rational(text: &str) -> CliResult<BigRational> {
    let t = text.trim();
    let parsed = if t.contains('/') {
        t.parse::<BigRational>().ok()
    } else {
        t.parse().ok().map(BigRational::from_integer)
    };
    parsed.ok_or_else(|| CliError::Usage(format!("{text:?} is not a rational num/den")))
}

fn parse_temperature(text: &str) -> CliResult<Temperature> {
    text.parse::<Temperature>()
        .map_err(|_| CliError::Usage(format!("temperature {text:?}: expected num/den with T > 0")))
}

/// A catalog name or the path of a spec file.
fn load_machine(arg: &str) -> CliResult<Machine> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        return Ok(parse_machine(&text)?);
    }
    match builtin_by_name(arg) {
        Ok(m) => Ok(m),
        Err(_) if arg.contains('/') || arg.ends_with(".toml") => Err(CliError::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
        )),
        Err(e) => Err(e.into()),
    }
}

/// Replaces every `U` by the table of its domain enumerated under
/// `budget`. Returns whether anything was replaced.
fn budget_universal(m: &Machine, budget: u64) -> CliResult<(Machine, Option<String>)> {
    match m.presentation() {
        Presentation::Universal => {
            let state = enumerate_domain(m, EnumerationState::new(m, Schedule::Doubling), budget)?;
            let note = format!(
                "{} enumerated to {} steps: {} programs found",
                m.name(),
                budget,
                state.discovered().len()
            );
            Ok((state.to_table_machine()?, Some(note)))
        }
        Presentation::Composite(factors) => {
            let mut notes = Vec::new();
            let mut replaced = Vec::with_capacity(factors.len());
            for f in factors {
                let (f, note) = budget_universal(f, budget)?;
                replaced.push(f);
                notes.extend(note);
            }
            let c = compose(&replaced)?.to_machine().with_name(m.name());
            Ok((c, (!notes.is_empty()).then(|| notes.join("; "))))
        }
        _ => Ok((m.clone(), None)),
    }
}

fn thermo_input(g: &Global, arg: &str) -> CliResult<(String, LengthSpectrum, Option<String>)> {
    let m = load_machine(arg)?;
    let (m, note) = budget_universal(&m, g.budget)?;
    Ok((m.name().to_string(), m.length_spectrum()?, note))
}

fn cmd_eval(g: &Global, machine: &str, temp: &str) -> CliResult<String> {
    let t = parse_temperature(temp)?;
    let eps = parse_precision(&g.eps)?;
    let (name, spec, note) = thermo_input(g, machine)?;
    let mut out = format!("machine  {name}\nT        {t}\n");
    if let Some(note) = &note {
        out.push_str(&format!(
            "note     {note}; values describe the discovered subdomain and Z is a lower bound\n"
        ));
    }
    match evaluate(&spec, &t, eps) {
        Ok(r) => out.push_str(&format_report(&r)),
        Err(Error::NoConvergenceCertificate(_)) if t.zone() != Zone::SubUnit => {
            let z = partial_z(&spec, &t, LOWER_BOUND_LENGTH, eps);
            out.push_str(&format!(
                "L        {LOWER_BOUND_LENGTH}\nZ >=     {}  (lower bound: partial sum, convergence not certified)\n\
                 F, E, S  not certified at this temperature\n",
                z.lo().to_decimal_down(DIGITS)
            ));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(out)
}

fn format_report(r: &ThermoReport) -> String {
    let mut out = format!("L        {}\n", r.truncation_length);
    for q in Quantity::ALL {
        let iv = r.get(q);
        out.push_str(&format!(
            "{q}        {}  {}  tail <= {}\n",
            iv.to_decimal(DIGITS),
            iv.to_decimal_pm(DIGITS),
            r.tail(q).to_decimal_up(6)
        ));
    }
    out
}

fn split_list(text: &str) -> impl Iterator<Item = &str> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn cmd_sweep(g: &Global, machine: &str, grid: &str, quantities: &str) -> CliResult<String> {
    let eps = parse_precision(&g.eps)?;
    let mut temps = split_list(grid)
        .map(|s| {
            let t = parse_temperature(s)?;
            if t.zone() != Zone::SubUnit {
                return Err(CliError::Usage(format!("grid value {s} is not inside (0, 1)")));
            }
            Ok(t)
        })
        .collect::<CliResult<Vec<_>>>()?;
    temps.sort();
    temps.dedup();
    let mut qs = split_list(quantities)
        .map(|s| s.parse::<Quantity>().map_err(CliError::from))
        .collect::<CliResult<Vec<_>>>()?;
    qs.sort_by_key(|q| q.symbol());
    qs.dedup();
    let (_, spec, note) = thermo_input(g, machine)?;
    if let Some(note) = note {
        eprintln!("note: {note}; Z values are lower bounds");
    }
    let reports = temps
        .par_iter()
        .map(|t| evaluate(&spec, t, eps))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = String::from("T_num,T_den,quantity,lo,hi,tail_bound,trunc_len\n");
    for (t, r) in temps.iter().zip(&reports) {
        for q in &qs {
            let iv = r.get(*q);
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                t.value().numer(),
                t.value().denom(),
                q,
                iv.lo().to_decimal_down(DIGITS),
                iv.hi().to_decimal_up(DIGITS),
                r.tail(*q).to_decimal_up(6),
                r.truncation_length
            ));
        }
    }
    Ok(out)
}

fn cmd_compose(machines: &[String]) -> CliResult<String> {
    let ms = machines
        .iter()
        .map(|m| load_machine(m))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(render_machine(&compose(&ms)?.to_machine())?)
}

fn cmd_enumerate(
    g: &Global,
    machine: &str,
    checkpoint: Option<&Path>,
    schedule: ScheduleArg,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    let m = load_machine(machine)?;
    let state = match checkpoint.filter(|p| p.is_file()) {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let saved: Checkpoint = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            EnumerationState::restore(&m, &saved)?
        }
        None => EnumerationState::new(
            &m,
            match schedule {
                ScheduleArg::Doubling => Schedule::Doubling,
                ScheduleArg::Linear => Schedule::Linear,
            },
        ),
    };
    let state = enumerate_domain(&m, state, g.budget)?;
    let mut json = serde_json::to_string_pretty(&state.checkpoint())
        .map_err(|e| CliError::Usage(e.to_string()))?;
    json.push('\n');
    let targets: Vec<PathBuf> = checkpoint
        .map(Path::to_path_buf)
        .into_iter()
        .chain(g.out.clone())
        .collect();
    if targets.is_empty() {
        return emit(None, &json, stdout);
    }
    for path in &targets {
        emit(Some(path), &json, stdout)?;
    }
    let summary = format!(
        "{}: {} programs discovered with {} steps\n",
        state.machine(),
        state.discovered().len(),
        state.budget()
    );
    emit(None, &summary, stdout)
}

fn cmd_complexity(
    g: &Global,
    machine: &str,
    target: Option<&str>,
    real: Option<&str>,
    n_max: Option<u32>,
) -> CliResult<String> {
    let m = load_machine(machine)?;
    match (target, real) {
        (Some(t), None) => {
            let s: BitString = t.parse()?;
            Ok(match complexity_upper(&m, &s, g.max_len, g.budget) {
                Ok(h) => format!("h_upper {h}\n"),
                Err(Error::NotFound) => "h_upper NotFound\n".to_string(),
                Err(e) => return Err(e.into()),
            })
        }
        (None, Some(r)) => {
            let alpha = RealSource::Rational(parse_rational(r)?);
            let n_max = n_max.ok_or_else(|| CliError::Usage("--real needs --n-max".into()))?;
            Ok(compression_profile(&m, &alpha, n_max, g.max_len, g.budget)?.to_csv())
        }
        _ => Err(CliError::Usage("give either --target or --real".into())),
    }
}

fn cmd_probe(g: &Global, probe: &Probe) -> CliResult<String> {
    match probe {
        Probe::Deficiency {
            machine,
            real,
            n_max,
            temp,
        } => {
            let m = load_machine(machine)?;
            let alpha = RealSource::Rational(parse_rational(real)?);
            let rate = parse_rational(temp)?;
            let profile = compression_profile(&m, &alpha, *n_max, g.max_len, g.budget)?;
            let d = deficiency_probe(&profile, &rate)?;
            Ok(format!(
                "deficiency {}/{}  (sample statistic over n <= {n_max}, not a randomness verdict)\n",
                d.numer(),
                d.denom()
            ))
        }
        Probe::Divergence {
            machine,
            temp,
            threshold,
        } => {
            let t = parse_temperature(temp)?;
            let m = parse_rational(threshold)?;
            let (_, spec, _) = thermo_input(g, machine)?;
            let l = detect_divergence(&spec, &t, &m)?;
            Ok(format!("L {l}  (Z_L > {m} at T = {t})\n"))
        }
        Probe::Predicates { machine } => {
            let m = load_machine(machine)?;
            let p = if m.is_universal() {
                let state = enumerate_domain(&m, EnumerationState::new(&m, Schedule::Doubling), g.budget)?;
                check_discovered(&state)
            } else {
                check_predicates(&m)
            };
            Ok(format!(
                "physically_reasonable {}\ncomputable_measure {}\n",
                p.physically_reasonable, p.computable_measure
            ))
        }
    }
}
