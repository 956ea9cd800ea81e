//! Command-line front end for `sdinv-core`.
//!
//! [`run`] parses arguments, runs one command and returns the exit code with
//! everything that would be written to stdout and stderr, so that the binary
//! and the tests share one code path.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use sdinv_core::certificate::{check_certificate_json, counting_entry, CertEntry, Certificate, FORMAT};
use sdinv_core::exactlin::{lattice_index, FinAbelianGroup, Membership, Subquotient};
use sdinv_core::kgamma::{
    chow2_from_filtration, filtration_membership, gamma_filtration, graded_torsion, quillen_lattice,
    GammaFiltration, GradedTorsionReport, SeveriBrauerConfig,
};
use sdinv_core::presets::{
    assemble_theorem_with, cited_fact, sl4x4_report, CitedFact, Source, TheoremOptions, TheoremRow,
};
use sdinv_core::roots::{analyze, GroupPreset, RootsAnalysis, MAX_N, MIN_N};
use sdinv_core::wittq::{verify_identity, IdentityId};
use sdinv_core::{Error, Lattice};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "sdinv", version, about = "Degree-3 invariants of (SL2)^n/mu and related groups")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Write a certificate for the command to FILE.
    #[arg(long, global = true, value_name = "FILE")]
    certificate: Option<PathBuf>,
    /// Verify a certificate written earlier.
    #[arg(long, value_name = "FILE")]
    check_certificate: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Indecomposable degree-3 invariants of a group preset.
    Inv3 {
        #[arg(long)]
        preset: String,
    },
    /// Torsion in CH^2 via the gamma filtration of a Severi-Brauer product.
    Chow2 {
        #[arg(long)]
        preset: String,
    },
    /// Gamma filtration queries.
    Gamma {
        #[command(subcommand)]
        command: GammaCommand,
    },
    /// Witt ring identity suites.
    Witt {
        #[command(subcommand)]
        command: WittCommand,
    },
    /// Rows of the main table; all rows when --n is omitted.
    Theorem {
        /// Number of SL2 factors, 2 to 8.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// The (SL4 x SL4)/mu example.
    Sl4x4,
}

#[derive(Subcommand, Debug)]
enum GammaCommand {
    /// Decide membership of an element in Gamma^d.
    Member {
        #[arg(long)]
        preset: String,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[arg(long)]
        degree: usize,
    },
    /// Graded pieces, epsilon indices and the counting identity.
    Report {
        #[arg(long)]
        preset: String,
    },
}

#[derive(Subcommand, Debug)]
enum WittCommand {
    /// Check an identity on random diagonal samples.
    Verify {
        #[arg(long)]
        identity: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// What one invocation produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub preset: Option<String>,
    pub results: Value,
    pub cited_facts: Vec<CitedFact>,
    pub certificate: Option<String>,
    pub versions: BTreeMap<String, String>,
    pub seed: Option<u64>,
}

/// Payload of one command before it is wrapped into a [`Report`].
struct Done {
    preset: Option<String>,
    results: Value,
    text: Vec<String>,
    cited: Vec<String>,
    entries: Vec<CertEntry>,
    seed: Option<u64>,
    /// A verdict that contradicts the module contracts.
    inconsistent: Option<String>,
}

impl Done {
    fn new(preset: Option<String>, results: Value) -> Self {
        Done {
            preset,
            results,
            text: Vec::new(),
            cited: Vec::new(),
            entries: Vec::new(),
            seed: None,
            inconsistent: None,
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_input() {
        EXIT_INPUT
    } else {
        EXIT_INCONSISTENT
    }
}

fn fail(code: i32, msg: impl std::fmt::Display) -> Outcome {
    Outcome {
        code,
        stdout: String::new(),
        stderr: format!("error: {msg}\n"),
    }
}

pub fn versions() -> BTreeMap<String, String> {
    BTreeMap::from([
        ("sdinv".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("certificate_format".to_string(), FORMAT.to_string()),
    ])
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: rendered,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: rendered,
                }
            };
        }
    };
    let echo = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");

    let command = match (cli.command, &cli.check_certificate) {
        (None, Some(path)) => return check_file(path, cli.json, &echo),
        (Some(_), Some(_)) => {
            return fail(EXIT_INPUT, "--check-certificate cannot be combined with a command")
        }
        (None, None) => return fail(EXIT_INPUT, "no command given; see --help"),
        (Some(c), None) => c,
    };

    let done = match execute(&command, cli.certificate.is_some()) {
        Ok(d) => d,
        Err(e) => return fail(exit_code(&e), e),
    };

    let mut certificate_path = None;
    if let Some(path) = &cli.certificate {
        let mut cert = Certificate::new(&echo);
        for e in done.entries {
            cert.push(e);
        }
        let written = cert
            .seal()
            .and_then(|c| c.to_json())
            .map_err(|e| e.to_string())
            .and_then(|text| std::fs::write(path, text + "\n").map_err(|e| e.to_string()));
        if let Err(e) = written {
            return fail(EXIT_INPUT, format!("cannot write certificate {}: {e}", path.display()));
        }
        certificate_path = Some(path.display().to_string());
    }

    let cited_facts = match done.cited.iter().map(|id| cited_fact(id)).collect() {
        Ok(f) => f,
        Err(e) => return fail(EXIT_INCONSISTENT, e),
    };
    let report = Report {
        command: echo,
        preset: done.preset,
        results: done.results,
        cited_facts,
        certificate: certificate_path,
        versions: versions(),
        seed: done.seed,
    };
    let stdout = if cli.json {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    } else {
        let mut lines = done.text;
        for f in &report.cited_facts {
            lines.push(format!("cited [{}]: {}", f.id, f.claim));
        }
        if let Some(p) = &report.certificate {
            lines.push(format!("certificate written to {p}"));
        }
        lines.join("\n") + "\n"
    };
    match done.inconsistent {
        Some(msg) => Outcome {
            code: EXIT_INCONSISTENT,
            stdout,
            stderr: format!("error: internal inconsistency: {msg}\n"),
        },
        None => Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        },
    }
}

fn check_file(path: &PathBuf, as_json: bool, echo: &str) -> Outcome {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_INPUT, format!("cannot read {}: {e}", path.display())),
    };
    let report = match check_certificate_json(&text) {
        Ok(r) => r,
        Err(e) => return fail(exit_code(&e), e),
    };
    let ok = report.ok();
    let stdout = if as_json {
        let r = Report {
            command: echo.to_string(),
            preset: None,
            results: json!({
                "valid": ok,
                "entries": report.entries,
                "digest_ok": report.digest_ok,
                "failures": report.failures,
            }),
            cited_facts: Vec::new(),
            certificate: Some(path.display().to_string()),
            versions: versions(),
            seed: None,
        };
        serde_json::to_string_pretty(&r).expect("report serializes") + "\n"
    } else {
        let mut lines = vec![format!(
            "certificate {}: {} entries, digest {}",
            path.display(),
            report.entries,
            if report.digest_ok { "ok" } else { "MISMATCH" }
        )];
        for (i, kind, why) in &report.failures {
            lines.push(format!("entry {i} ({kind}) FAILED: {why}"));
        }
        lines.push(if ok { "VALID".into() } else { "INVALID".into() });
        lines.join("\n") + "\n"
    };
    Outcome {
        code: if ok { EXIT_OK } else { EXIT_INCONSISTENT },
        stdout,
        stderr: if ok {
            String::new()
        } else {
            "error: certificate check failed\n".into()
        },
    }
}

fn execute(command: &Command, with_cert: bool) -> sdinv_core::Result<Done> {
    match command {
        Command::Inv3 { preset } => inv3(preset, with_cert),
        Command::Chow2 { preset } => chow2(preset, with_cert),
        Command::Gamma {
            command: GammaCommand::Member {
                preset,
                element,
                degree,
            },
        } => gamma_member(preset, element, *degree),
        Command::Gamma {
            command: GammaCommand::Report { preset },
        } => gamma_report(preset, with_cert),
        Command::Witt {
            command: WittCommand::Verify {
                identity,
                trials,
                seed,
            },
        } => witt_verify(identity, *trials, *seed),
        Command::Theorem { n, trials, seed } => theorem(*n, *trials, *seed, with_cert),
        Command::Sl4x4 => sl4x4(with_cert),
    }
}

fn group_str(g: &FinAbelianGroup) -> String {
    g.to_string()
}

fn roots_entries(a: &RootsAnalysis) -> sdinv_core::Result<Vec<CertEntry>> {
    let mut out = vec![CertEntry::hermite("T_G", &a.t_g.lattice)];
    if let Some(t_h) = &a.t_h {
        out.push(CertEntry::hermite("T_H", &t_h.lattice));
    }
    out.push(CertEntry::hermite("invariant_forms", &a.invariants.lattice));
    if let (Some(dec), Some(group)) = (&a.dec, &a.group) {
        let inv = &a.invariants.lattice;
        out.push(CertEntry::hermite("dec", &dec.lattice));
        let sq = Subquotient::compute(&dec.lattice, inv)?;
        out.push(CertEntry::Smith {
            label: "inv_mod_dec".into(),
            decomposition: sq.smith,
        });
        out.push(CertEntry::subquotient("inv_mod_dec", &dec.lattice, inv, group));
        out.push(CertEntry::index(
            "inv_mod_dec",
            &dec.lattice,
            inv,
            &lattice_index(&dec.lattice, inv)?,
        ));
        for w in &a.witnesses {
            out.push(CertEntry::torsion_witness(
                &format!("inv_mod_dec:{}", w.display),
                &dec.lattice,
                inv,
                &w.lattice_coordinates,
                &w.order,
            ));
        }
    }
    Ok(out)
}

fn gl_cited_group(preset: &GroupPreset) -> Option<(FinAbelianGroup, &'static str)> {
    let n: usize = preset.name.strip_prefix("gl2n:")?.parse().ok()?;
    Some(if n == 2 {
        (FinAbelianGroup::trivial(), "inv_g_n2")
    } else {
        (FinAbelianGroup::cyclic(2), "inv_g_n3")
    })
}

fn inv3(name: &str, with_cert: bool) -> sdinv_core::Result<Done> {
    let preset = GroupPreset::by_name(name)?;
    let a = analyze(&preset)?;
    let mut cited = Vec::new();
    let (group, source) = match (&a.group, gl_cited_group(&preset)) {
        (Some(g), _) => (Some(g.clone()), "computed".to_string()),
        (None, Some((g, fact))) => {
            cited.push(fact.to_string());
            (Some(g), format!("cited:{fact}"))
        }
        (None, None) => (None, "not available".into()),
    };
    let witnesses: Vec<Value> = a
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "form": w.display,
                "named": w.named,
                "order": w.order.to_string(),
            })
        })
        .collect();
    let named_basis = |l: &sdinv_core::roots::CharacterLattice| -> Vec<String> {
        l.named_basis.iter().map(|v| v.label.clone()).collect()
    };
    let results = json!({
        "group": group.as_ref().map(group_str),
        "group_source": source,
        "description": a.description,
        "t_g": named_basis(&a.t_g),
        "t_h": a.t_h.as_ref().map(named_basis),
        "invariant_forms": a.invariant_display,
        "witnesses": witnesses,
        "candidate_generates": a.candidate_generates,
    });
    let mut text = vec![
        format!("preset {name}: {}", a.description),
        format!("T_G* basis: {}", named_basis(&a.t_g).join(", ")),
    ];
    if let Some(t_h) = &a.t_h {
        text.push(format!("T_H* basis: {}", named_basis(t_h).join(", ")));
    }
    text.push(format!("invariant forms: {}", a.invariant_display.join(", ")));
    text.push(format!(
        "Inv^3_ind = {} ({source})",
        group.as_ref().map(group_str).unwrap_or_else(|| "?".into())
    ));
    for w in &a.witnesses {
        text.push(format!(
            "witness of order {}: {}",
            w.order,
            w.named.as_deref().unwrap_or(&w.display)
        ));
    }
    let mut done = Done::new(Some(name.to_string()), results);
    done.text = text;
    done.cited = cited;
    if with_cert {
        done.entries = roots_entries(&a)?;
    }
    Ok(done)
}

fn config_for(name: &str) -> sdinv_core::Result<(SeveriBrauerConfig, GammaFiltration)> {
    let config = SeveriBrauerConfig::preset(name)?;
    let filtration = gamma_filtration(&config)?;
    Ok((config, filtration))
}

fn gamma_entries(
    f: &GammaFiltration,
    g: &GradedTorsionReport,
) -> sdinv_core::Result<Vec<CertEntry>> {
    let rank = f.config.ring().rank();
    let quillen = quillen_lattice(&f.config);
    let mut out = vec![
        CertEntry::hermite("K0(X)", &quillen),
        CertEntry::index(
            "split_index",
            &quillen,
            &Lattice::full(rank),
            &lattice_index(&quillen, &Lattice::full(rank))?,
        ),
    ];
    for d in 0..f.lattices.len() {
        out.push(CertEntry::hermite(&format!("Gamma^{d}"), &f.level(d)));
    }
    for p in &g.pieces {
        let (lower, upper) = (f.level(p.degree + 1), f.level(p.degree));
        let label = format!("Gamma^{}/{}", p.degree, p.degree + 1);
        out.push(CertEntry::subquotient(&label, &lower, &upper, &p.quotient));
        for w in &p.torsion.witnesses {
            out.push(CertEntry::torsion_witness(&label, &lower, &upper, &w.element, &w.order));
        }
    }
    out.push(counting_entry(
        &f.config.name,
        &g.torsion_order,
        &g.split_index,
        &g.epsilon(),
    ));
    Ok(out)
}

fn pieces_json(g: &GradedTorsionReport) -> Value {
    Value::Array(
        g.pieces
            .iter()
            .map(|p| {
                json!({
                    "degree": p.degree,
                    "quotient": group_str(&p.quotient),
                    "torsion": group_str(&p.torsion.group),
                    "epsilon": p.epsilon.to_string(),
                    "degree_filtration_index": p.degree_filtration_index.to_string(),
                    "delta": p.delta,
                })
            })
            .collect(),
    )
}

fn counting_lines(g: &GradedTorsionReport) -> Vec<String> {
    let mut text = Vec::new();
    for p in &g.pieces {
        text.push(format!(
            "Gamma^{d}/{e}: {q}, torsion {t}, epsilon {eps}, delta {delta}",
            d = p.degree,
            e = p.degree + 1,
            q = p.quotient,
            t = p.torsion.group,
            eps = p.epsilon,
            delta = p.delta
        ));
    }
    text.push(format!(
        "total torsion {} * split index {} {} product of epsilon {}",
        g.torsion_order,
        g.split_index,
        if g.counting_identity_holds { "=" } else { "!=" },
        g.epsilon_product
    ));
    text
}

fn chow2(name: &str, with_cert: bool) -> sdinv_core::Result<Done> {
    let (_, f) = config_for(name)?;
    let g = graded_torsion(&f)?;
    let chow = chow2_from_filtration(&f)?;
    let results = json!({
        "group": group_str(&chow.group),
        "witnesses": chow.witness_display,
        "torsion_order": g.torsion_order.to_string(),
        "split_index": g.split_index.to_string(),
        "epsilon": g.epsilon().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "epsilon_product": g.epsilon_product.to_string(),
        "counting_identity_holds": g.counting_identity_holds,
        "pieces": pieces_json(&g),
    });
    let mut text = vec![format!("CH^2 torsion of {name}: {}", chow.group)];
    for w in &chow.witness_display {
        text.push(format!("witness: {w}"));
    }
    text.extend(counting_lines(&g));
    let mut done = Done::new(Some(name.to_string()), results);
    if !g.counting_identity_holds {
        done.inconsistent = Some("counting identity fails".into());
    }
    done.text = text;
    done.cited = vec!["chow_gamma".into()];
    if with_cert {
        done.entries = gamma_entries(&f, &g)?;
    }
    Ok(done)
}

fn gamma_report(name: &str, with_cert: bool) -> sdinv_core::Result<Done> {
    let (config, f) = config_for(name)?;
    let g = graded_torsion(&f)?;
    let ring = config.ring();
    let levels: Vec<Value> = (0..f.lattices.len())
        .map(|d| {
            let l = f.level(d);
            json!({
                "degree": d,
                "rank": l.rank(),
                "basis": l.basis().iter().map(|b| ring.element(b.clone()).map(|e| ring.format(&e))).collect::<Result<Vec<_>, _>>().unwrap_or_default(),
            })
        })
        .collect();
    let results = json!({
        "degrees": config.degrees,
        "levels": levels,
        "pieces": pieces_json(&g),
        "torsion_order": g.torsion_order.to_string(),
        "split_index": g.split_index.to_string(),
        "epsilon_product": g.epsilon_product.to_string(),
        "counting_identity_holds": g.counting_identity_holds,
    });
    let mut text = vec![format!("gamma filtration of {name}, degrees {:?}", config.degrees)];
    text.extend(counting_lines(&g));
    let mut done = Done::new(Some(name.to_string()), results);
    if !g.counting_identity_holds {
        done.inconsistent = Some("counting identity fails".into());
    }
    done.text = text;
    if with_cert {
        done.entries = gamma_entries(&f, &g)?;
    }
    Ok(done)
}

fn gamma_member(name: &str, element: &str, degree: usize) -> sdinv_core::Result<Done> {
    let (_, f) = config_for(name)?;
    let m = filtration_membership(&f, element, degree)?;
    let (verdict, detail) = match &m.membership {
        Membership::Member { coordinates } => (
            "YES",
            json!({ "coordinates": coordinates.iter().map(ToString::to_string).collect::<Vec<_>>() }),
        ),
        Membership::NonMember { certificate } => ("NO", serde_json::to_value(certificate).expect("serializes")),
    };
    let results = json!({
        "element": m.display,
        "degree": degree,
        "verdict": verdict,
        "certificate": detail,
    });
    let mut text = vec![format!("{} in Gamma^{degree}({name}): {verdict}", m.display)];
    if let Membership::NonMember { certificate } = &m.membership {
        text.push(match certificate {
            sdinv_core::exactlin::NonMembership::Modular { prime, exponent, .. } => {
                format!("separating functional modulo {prime}^{exponent}")
            }
            sdinv_core::exactlin::NonMembership::Rank { .. } => {
                "separating functional vanishing on the lattice".into()
            }
        });
    }
    let mut done = Done::new(Some(name.to_string()), results);
    done.text = text;
    done.entries = vec![CertEntry::membership(
        &format!("{} in Gamma^{degree}", m.display),
        &m.lattice,
        m.element.coeffs(),
        &m.membership,
    )];
    Ok(done)
}

fn witt_verify(identity: &str, trials: usize, seed: u64) -> sdinv_core::Result<Done> {
    let id: IdentityId = identity.parse()?;
    let cases = verify_identity(id, trials, seed)?;
    let passed = cases.iter().filter(|c| c.passed).count();
    let failures: Vec<Value> = cases
        .iter()
        .filter(|c| !c.passed)
        .map(|c| serde_json::to_value(c).expect("serializes"))
        .collect();
    let results = json!({
        "identity": id.name(),
        "level": id.level(),
        "trials": trials,
        "passed": passed,
        "failures": failures,
        "samples": cases.iter().map(|c| serde_json::to_value(&c.sample).expect("serializes")).collect::<Vec<_>>(),
    });
    let mut done = Done::new(None, results);
    done.text = vec![format!("{id}: {passed}/{trials} trials passed (seed {seed})")];
    done.seed = Some(seed);
    done.cited = vec!["real_place_h3".into()];
    if passed != trials {
        done.inconsistent = Some(format!("{} trials of {id} failed", trials - passed));
    }
    done.entries = cases.iter().map(CertEntry::identity_trial).collect();
    Ok(done)
}

fn source_str(s: &Source) -> String {
    match s {
        Source::Computed { via } => format!("computed: {via}"),
        Source::Cited { facts } => format!("cited: {}", facts.join(", ")),
        Source::Exactness => "exact sequence".into(),
    }
}

fn row_json(r: &TheoremRow) -> Value {
    let entry = |e: &sdinv_core::presets::Entry| json!({ "group": group_str(&e.group), "source": e.source });
    json!({
        "n": r.n,
        "inv3_ind_H": entry(&r.inv3_ind_h),
        "inv3_ind_G": entry(&r.inv3_ind_g),
        "chow2_tors": entry(&r.chow2_tors),
        "sdec_mod_dec_H": entry(&r.sdec_mod_dec_h),
        "sdec_mod_dec_G": entry(&r.sdec_mod_dec_g),
        "inv_witnesses": r.inv_witnesses,
        "chow_witnesses": r.chow_witnesses,
        "identity_checks": r.identity_checks,
        "exactness_holds": r.exactness_holds,
        "cites_restriction": r.cites_restriction,
        "notes": r.notes,
    })
}

fn theorem(n: Option<usize>, trials: usize, seed: u64, with_cert: bool) -> sdinv_core::Result<Done> {
    let ns: Vec<usize> = match n {
        Some(n) => vec![n],
        None => (MIN_N..=MAX_N).collect(),
    };
    let opts = TheoremOptions { trials, seed };
    let rows = ns
        .iter()
        .map(|&n| assemble_theorem_with(n, &opts))
        .collect::<sdinv_core::Result<Vec<_>>>()?;
    let mut cited = vec!["exact_sequence".to_string()];
    let mut text = Vec::new();
    for r in &rows {
        text.push(format!(
            "n = {}: Inv3(H)_ind = {}, Inv3(G)_ind = {}, CH2_tors = {}, Sdec(H)/Dec(H) = {}, Sdec(G)/Dec(G) = {}{}",
            r.n,
            r.inv3_ind_h.group,
            r.inv3_ind_g.group,
            r.chow2_tors.group,
            r.sdec_mod_dec_h.group,
            r.sdec_mod_dec_g.group,
            if r.cites_restriction { "  [cited: restriction]" } else { "" }
        ));
        for (what, e) in [
            ("Inv3(G)_ind", &r.inv3_ind_g),
            ("CH2_tors", &r.chow2_tors),
            ("Sdec(G)/Dec(G)", &r.sdec_mod_dec_g),
        ] {
            text.push(format!("    {what}: {}", source_str(&e.source)));
        }
        for v in &r.identity_checks {
            text.push(format!("    {}: {}/{} trials passed", v.identity, v.passed, v.trials));
        }
        for e in [&r.inv3_ind_g, &r.chow2_tors, &r.sdec_mod_dec_g] {
            if let Source::Cited { facts } = &e.source {
                for f in facts {
                    if !cited.contains(f) {
                        cited.push(f.clone());
                    }
                }
            }
        }
    }
    let mut done = Done::new(None, json!({ "rows": rows.iter().map(row_json).collect::<Vec<_>>() }));
    done.seed = Some(seed);
    if let Some(r) = rows.iter().find(|r| !r.exactness_holds) {
        done.inconsistent = Some(format!("exactness bookkeeping fails for n = {}", r.n));
    }
    done.text = text;
    done.cited = cited;
    if with_cert {
        for &n in &ns {
            let a = analyze(&GroupPreset::by_name(&format!("sl2n:{n}"))?)?;
            done.entries.extend(roots_entries(&a)?);
            if let Some(name) = sdinv_core::presets::chow_config_for(n) {
                let (_, f) = config_for(name)?;
                let g = graded_torsion(&f)?;
                done.entries.extend(gamma_entries(&f, &g)?);
            }
        }
        for r in &rows {
            for v in &r.identity_checks {
                for c in verify_identity(v.identity, v.trials, v.seed)? {
                    done.entries.push(CertEntry::identity_trial(&c));
                }
            }
        }
    }
    Ok(done)
}

fn sl4x4(with_cert: bool) -> sdinv_core::Result<Done> {
    let r = sl4x4_report()?;
    let results = json!({
        "group": group_str(&r.inv3_ind.group),
        "witness": r.witness,
        "candidate_generates": r.candidate_generates,
        "chow2_tors": group_str(&r.chow2_tors.group),
        "variety": r.variety,
        "sdec_mod_dec": group_str(&r.sdec_mod_dec.group),
        "counting_identity_holds": r.counting_identity_holds,
        "all_semi_decomposable": r.all_semi_decomposable,
    });
    let mut done = Done::new(Some("sl4x4".into()), results);
    done.text = vec![
        format!(
            "Inv^3_ind = {}, generated by {}",
            r.inv3_ind.group,
            r.witness.as_deref().unwrap_or("-")
        ),
        format!("CH^2 torsion of {}: {}", r.variety, r.chow2_tors.group),
        format!("Sdec/Dec = {}", r.sdec_mod_dec.group),
        format!(
            "every normalized degree-3 invariant is semi-decomposable: {}",
            r.all_semi_decomposable
        ),
    ];
    done.cited = vec!["exact_sequence".into(), "chow_gamma".into()];
    if with_cert {
        let a = analyze(&GroupPreset::by_name("sl4x4")?)?;
        done.entries = roots_entries(&a)?;
        let (_, f) = config_for(&r.variety)?;
        let g = graded_torsion(&f)?;
        done.entries.extend(gamma_entries(&f, &g)?);
    }
    Ok(done)
}
