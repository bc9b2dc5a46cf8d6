//! `homsec`: command-line access to structure analysis, bounds, schemes and
//! the ideality classifier.
//!
//! Exit status: 0 on success, 1 when a verification fails (or a non-ideal
//! structure meets `--expect-ideal`), 2 on usage, input or parse errors.

use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use homsec::bounds::{search_bound, SearchCaps};
use homsec::classifier::{certify_ideal, classify, default_field, ClassifyOptions, Status};
use homsec::enumeration::{check_theorem, enumerate_structures, EnumerationFilter};
use homsec::io::{self, Format, Report, ShareFile};
use homsec::reduction::reduce;
use homsec::scheme::{
    deal, is_vector_space_structure_exhaustive, reconstruct, verify_correctness, verify_privacy,
    LinearScheme, DEFAULT_STATE_CAP,
};
use homsec::AccessStructure;

#[derive(Parser)]
#[command(name = "homsec", version, about = "Analyze k-homogeneous access structures")]
struct Cli {
    /// Output style: `human` (key: value) or `records` (key=value).
    #[arg(long, global = true, default_value = "human")]
    format: Format,
    /// Append the wall-clock time of the command to the output.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct CapArgs {
    /// Longest chain searched (default k + 1).
    #[arg(long)]
    max_m: Option<usize>,
    /// Largest `A` searched (default k).
    #[arg(long)]
    max_a: Option<usize>,
    /// Stop the search after this many seconds.
    #[arg(long, value_name = "SECS")]
    budget: Option<f64>,
}

impl CapArgs {
    fn caps(self, k: usize) -> Result<SearchCaps> {
        let mut caps = SearchCaps::for_order(k);
        if let Some(m) = self.max_m {
            caps.max_m = m;
        }
        if let Some(a) = self.max_a {
            caps.max_a = a;
        }
        if let Some(secs) = self.budget {
            caps.time_budget = Some(
                Duration::try_from_secs_f64(secs).map_err(|_| anyhow!("invalid budget {secs}"))?,
            );
        }
        Ok(caps)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sizes, omega(k+1), threshold test and hypotheses.
    Analyze { file: PathBuf },
    /// Equivalence classes and the reduced structure.
    Reduce {
        file: PathBuf,
        /// Also write the reduced structure file here.
        #[arg(long, value_name = "PATH")]
        quotient_out: Option<PathBuf>,
    },
    /// Best independent-sequence bound within the caps.
    Bound {
        file: PathBuf,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Ideal / not ideal decision with evidence.
    Classify {
        file: PathBuf,
        #[command(flatten)]
        caps: CapArgs,
        /// Prime field for the ideal scheme.
        #[arg(long)]
        field: Option<u64>,
        /// Skip exhaustive verification of the ideal scheme.
        #[arg(long)]
        no_verify: bool,
        /// Exit with status 1 unless the structure is classified IDEAL.
        #[arg(long)]
        expect_ideal: bool,
    },
    /// Print the ideal vector-space scheme as a scheme file.
    Scheme {
        file: PathBuf,
        #[arg(long)]
        field: Option<u64>,
    },
    /// Split a secret into shares, written as a share file.
    Deal {
        file: PathBuf,
        #[arg(long)]
        secret: u64,
        #[arg(long)]
        field: Option<u64>,
        #[arg(long)]
        seed: u64,
        /// Use this scheme file instead of the constructed threshold scheme.
        #[arg(long, value_name = "SCHEMEFILE")]
        scheme: Option<PathBuf>,
    },
    /// Recover the secret from the shares of a qualified set.
    Reconstruct {
        file: PathBuf,
        #[arg(long, value_name = "SHAREFILE")]
        shares: PathBuf,
        /// Participants to use, e.g. `1,2,4`.
        #[arg(long, value_name = "LIST")]
        set: String,
        #[arg(long, value_name = "SCHEMEFILE")]
        scheme: Option<PathBuf>,
    },
    /// Exhaustive correctness and privacy check.
    VerifyScheme {
        file: PathBuf,
        #[arg(long, conflicts_with = "scheme")]
        field: Option<u64>,
        #[arg(long, value_name = "SCHEMEFILE")]
        scheme: Option<PathBuf>,
        /// Largest number of dealer vectors enumerated.
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: u64,
    },
    /// List structures on n participants, or sweep them with the classifier.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// One structure per isomorphism class.
        #[arg(long)]
        dedup: bool,
        /// Only structures meeting the omega(k+1) hypotheses.
        #[arg(long)]
        hypotheses_only: bool,
        /// Classify every hypothesis-satisfying structure and report
        /// outcomes at odds with the characterization.
        #[arg(long)]
        check_theorem: bool,
        /// Append a classification block to each listed structure.
        #[arg(long, conflicts_with = "check_theorem")]
        classify: bool,
        #[command(flatten)]
        caps: CapArgs,
    },
}

/// Output text plus exit status.
struct Outcome {
    text: String,
    failed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, failed: false }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let start = Instant::now();
    match run(&cli) {
        Ok(mut outcome) => {
            if cli.timing {
                let mut r = Report::new();
                r.push("wall time ms", start.elapsed().as_millis());
                outcome.text.push_str(&r.render(cli.format));
            }
            print!("{}", outcome.text);
            ExitCode::from(u8::from(outcome.failed))
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("HOMSEC_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| anyhow!("HOMSEC_THREADS must be a positive integer, got `{value}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("configuring the thread pool")
}

fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_structure(path: &Path) -> Result<AccessStructure> {
    let text = read_text(path)?;
    io::parse_structure(&text).with_context(|| format!("parsing {}", path.display()))
}

/// The scheme from `scheme_file`, or the constructed threshold scheme over
/// `field` (default: smallest valid prime). The flag says whether the field
/// was chosen by default.
fn load_scheme(
    g: &AccessStructure,
    scheme_file: Option<&Path>,
    field: Option<u64>,
) -> Result<(LinearScheme, bool)> {
    if let Some(path) = scheme_file {
        let text = read_text(path)?;
        let (f, asg) =
            io::parse_scheme(&text).with_context(|| format!("parsing {}", path.display()))?;
        if let Some(p) = field {
            if p != f.modulus() {
                bail!("--field {p} disagrees with field {} in {}", f.modulus(), path.display());
            }
        }
        let scheme = LinearScheme::new_unchecked(g.clone(), f, asg)?;
        return Ok((scheme, false));
    }
    let defaulted = field.is_none();
    let p = match field {
        Some(p) => p,
        None => default_field(&reduce(g)?),
    };
    let scheme = certify_ideal(g, p).context(
        "no threshold scheme can be built for this structure (supply one with --scheme)",
    )?;
    Ok((scheme, defaulted))
}

fn field_source(defaulted: bool) -> &'static str {
    if defaulted {
        "default"
    } else {
        "given"
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let fmt = cli.format;
    match &cli.command {
        Command::Analyze { file } => {
            let g = load_structure(file)?;
            Ok(Outcome::ok(io::analyze_report(&g).render(fmt)))
        }
        Command::Reduce { file, quotient_out } => {
            let g = load_structure(file)?;
            let r = reduce(&g)?;
            if let Some(path) = quotient_out {
                fs::write(path, io::write_structure(&r.quotient))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(Outcome::ok(io::reduction_report(&r).render(fmt)))
        }
        Command::Bound { file, caps } => {
            let g = load_structure(file)?;
            let caps = caps.caps(g.k())?;
            let outcome = search_bound(&g, &caps)?;
            let mut r = Report::new();
            r.push("max m", caps.max_m).push("max a", caps.max_a);
            r.push("exhaustive", if outcome.exhaustive { "yes" } else { "no" });
            match &outcome.best {
                Some(cert) => {
                    r.append(io::certificate_report(cert));
                }
                None => {
                    r.push("bound", "none");
                }
            }
            Ok(Outcome::ok(r.render(fmt)))
        }
        Command::Classify {
            file,
            caps,
            field,
            no_verify,
            expect_ideal,
        } => {
            let g = load_structure(file)?;
            let options = ClassifyOptions {
                caps: caps.caps(g.k())?,
                field: *field,
                verify_scheme: !no_verify,
                ..ClassifyOptions::for_order(g.k())
            };
            let c = classify(&g, &options)?;
            let mut r = io::classification_report(&c);
            if c.status == Status::Ideal {
                r.push("field source", field_source(field.is_none()));
            }
            Ok(Outcome {
                text: r.render(fmt),
                failed: *expect_ideal && c.status != Status::Ideal,
            })
        }
        Command::Scheme { file, field } => {
            let g = load_structure(file)?;
            let (scheme, defaulted) = load_scheme(&g, None, *field)?;
            let mut text = format!("# field chosen: {}\n", field_source(defaulted));
            text.push_str(&io::write_scheme(scheme.field(), scheme.assignment()));
            Ok(Outcome::ok(text))
        }
        Command::Deal {
            file,
            secret,
            field,
            seed,
            scheme,
        } => {
            let g = load_structure(file)?;
            let (scheme, defaulted) = load_scheme(&g, scheme.as_deref(), *field)?;
            let table = deal(&scheme, *secret, *seed)?;
            let mut text = format!("# field chosen: {}\n", field_source(defaulted));
            text.push_str(&io::write_shares(&ShareFile::from_table(
                scheme.field().modulus(),
                &table,
            )));
            Ok(Outcome::ok(text))
        }
        Command::Reconstruct {
            file,
            shares,
            set,
            scheme,
        } => {
            let g = load_structure(file)?;
            let share_file = io::parse_shares(&read_text(shares)?)
                .with_context(|| format!("parsing {}", shares.display()))?;
            let set = io::parse_participant_list(set)
                .ok_or_else(|| anyhow!("malformed participant list `{set}`"))?;
            let (scheme, _) = load_scheme(&g, scheme.as_deref(), Some(share_file.field))?;
            let mut r = Report::new();
            r.push("set", set);
            let failed = match reconstruct(&scheme, set, &share_file.pairs()) {
                Ok(secret) => {
                    r.push("secret", secret);
                    false
                }
                Err(e) => {
                    r.push("secret", "none");
                    r.push("reason", e);
                    true
                }
            };
            Ok(Outcome {
                text: r.render(fmt),
                failed,
            })
        }
        Command::VerifyScheme {
            file,
            field,
            scheme,
            state_cap,
        } => {
            let g = load_structure(file)?;
            let (scheme, defaulted) = load_scheme(&g, scheme.as_deref(), *field)?;
            let realizes =
                is_vector_space_structure_exhaustive(&g, scheme.assignment(), scheme.field())?;
            let correct = verify_correctness(&scheme, *state_cap)?;
            let private = verify_privacy(&scheme, *state_cap)?;
            let mut r = Report::new();
            r.push("field", scheme.field().modulus());
            r.push("field source", field_source(defaulted));
            r.push("realizes structure", if realizes { "yes" } else { "no" });
            r.append(io::verification_report(&correct, &private));
            let failed = !(realizes && correct.passed() && private.passed());
            r.push("result", if failed { "FAIL" } else { "PASS" });
            Ok(Outcome {
                text: r.render(fmt),
                failed,
            })
        }
        Command::Enumerate {
            n,
            k,
            dedup,
            hypotheses_only,
            check_theorem: sweep,
            classify: with_classes,
            caps,
        } => {
            let caps = caps.caps(*k)?;
            if *sweep {
                let report = check_theorem(*n, *k, *dedup, &caps)?;
                return Ok(Outcome {
                    text: io::theorem_report(&report).render(fmt),
                    failed: !report.passed(),
                });
            }
            let filter = EnumerationFilter {
                require_hypotheses: *hypotheses_only,
                dedup_iso: *dedup,
                ..EnumerationFilter::new(*n, *k)
            };
            let structures = enumerate_structures(&filter)?;
            let classes = if *with_classes {
                let options = ClassifyOptions {
                    caps,
                    ..ClassifyOptions::for_order(*k)
                };
                let cs = structures
                    .par_iter()
                    .map(|g| classify(g, &options))
                    .collect::<Result<Vec<_>, _>>()?;
                Some(cs)
            } else {
                None
            };
            let mut text = String::new();
            for (i, g) in structures.iter().enumerate() {
                if i > 0 {
                    text.push_str(io::STREAM_SEPARATOR);
                    text.push('\n');
                }
                match fmt {
                    Format::Human => text.push_str(&io::write_structure(g)),
                    Format::Records => text.push_str(&structure_records(g).render(fmt)),
                }
                if let Some(cs) = &classes {
                    let block = io::classification_report(&cs[i]).render(fmt);
                    for line in block.lines() {
                        if fmt == Format::Human {
                            text.push_str("# ");
                        }
                        text.push_str(line);
                        text.push('\n');
                    }
                }
            }
            // a comment in human mode keeps the stream parseable
            let mut summary = Report::new();
            summary.push("structures", structures.len());
            let summary = summary.render(fmt);
            if fmt == Format::Human {
                text.push_str("# ");
            }
            text.push_str(&summary);
            Ok(Outcome::ok(text))
        }
    }
}

fn structure_records(g: &AccessStructure) -> Report {
    let mut r = Report::new();
    r.push("participants", g.n()).push("k", g.k());
    for m in g.basis() {
        let members: Vec<String> = m.iter().map(|p| p.to_string()).collect();
        r.push("minset", members.join(" "));
    }
    r
}
