use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{ArgGroup, Parser, Subcommand};
use wcifano::certify::{classify_family, parse_septuple, superrigid_check, Classification, SuperrigidError};
use wcifano::db::{load_db, DbError, FamilyDb};
use wcifano::report::{cmd_certify, cmd_tables};
use wcifano::wps::ClassTag;

/// Invariants and lct certificates for codimension-2 weighted complete intersection Fano 3-folds.
#[derive(Parser)]
#[command(name = "wcifano", version)]
struct Cli {
    /// Family database.
    #[arg(long, global = true, env = "WCIFANO_DB", default_value = "data/families.json")]
    db: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute a table's derivable columns and diff them against the database.
    Tables {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        which: u8,
    },
    /// Check every certificate step for one family or all of them.
    #[command(group(ArgGroup::new("target").required(true).args(["family", "all"])))]
    Certify {
        #[arg(long)]
        family: Option<u32>,
        #[arg(long)]
        all: bool,
        /// Write the certificates as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Classify families from weights and degrees and compare with the recorded class.
    Classify {
        #[arg(long)]
        family: Option<u32>,
    },
    /// Check a hypersurface septuple "d;a0,a1,a2,a3,a4,a5".
    Superrigid {
        #[arg(long)]
        septuple: String,
    },
    /// Load the database and report schema and cross-reference violations.
    ValidateDb,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn open(path: &Path) -> Result<FamilyDb> {
    load_db(path).with_context(|| format!("loading {}", path.display()))
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Tables { which } => {
            let report = cmd_tables(&open(&cli.db)?, which);
            print!("{}", report.render());
            if !report.diffs.is_empty() {
                eprintln!("table {which}: {} cell(s) differ from the database", report.diffs.len());
            }
            Ok(report.exit_code() as u8)
        }
        Command::Certify { family, json, .. } => {
            let db = open(&cli.db)?;
            if let Some(n) = family {
                anyhow::ensure!(db.families.iter().any(|r| r.no == n), "no family {n} in the database");
            }
            let run = cmd_certify(&db, family);
            print!("{}", run.text);
            for e in &run.errors {
                eprintln!("incomplete data: {e}");
            }
            for (no, got, want) in &run.mismatches {
                eprintln!("family {no}: verdict {got}, expected {want}");
            }
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&run.certificates)?;
                std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(run.exit_code() as u8)
        }
        Command::Classify { family } => {
            let db = open(&cli.db)?;
            let mut recs: Vec<_> = db.families.iter().filter(|r| family.map_or(true, |n| r.no == n)).collect();
            anyhow::ensure!(!recs.is_empty(), "no family {} in the database", family.unwrap_or_default());
            recs.sort_by_key(|r| r.no);
            let mut mismatches = 0;
            for rec in recs {
                let got = classify_family(&rec.family());
                let want = match rec.class {
                    ClassTag::Fi => Some(Classification::Fi),
                    ClassTag::Fii => Some(Classification::Fii),
                    _ => None,
                };
                let ok = want.map_or(got == Classification::Other, |w| w == got);
                let recorded = want.map_or("other".to_string(), |w| w.to_string());
                println!(
                    "{:>3}  X_{{{},{}}} in P({})  {:<6} recorded {:<6} {}",
                    rec.no,
                    rec.degrees[0],
                    rec.degrees[1],
                    join(&rec.weights),
                    got.to_string(),
                    recorded,
                    if ok { "ok" } else { "DIFF" }
                );
                mismatches += usize::from(!ok);
            }
            if mismatches > 0 {
                eprintln!("{mismatches} classification(s) differ from the database");
                return Ok(1);
            }
            Ok(0)
        }
        Command::Superrigid { septuple } => {
            let (d, w) = match parse_septuple(&septuple) {
                Ok(x) => x,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(2);
                }
            };
            let db = open(&cli.db)?;
            match superrigid_check(&db, d, &w) {
                Ok(r) if r.certified => {
                    println!("({d};{}) certified: family {}, d' = {}", join(&w), r.family_no, r.d_prime);
                    Ok(0)
                }
                Ok(r) => {
                    println!("({d};{}) not certified: family {}, d' = {}", join(&w), r.family_no, r.d_prime);
                    for reason in &r.reasons {
                        eprintln!("  {reason}");
                    }
                    Ok(1)
                }
                Err(e @ (SuperrigidError::NonPositiveDPrime(_) | SuperrigidError::NoMatchingFamily(..))) => {
                    println!("({d};{}) not certified", join(&w));
                    eprintln!("  {e}");
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::ValidateDb => match load_db(&cli.db) {
            Ok(db) => {
                println!("{}: version {}, {} families, 0 violations", cli.db.display(), db.version, db.families.len());
                Ok(0)
            }
            Err(DbError::Invalid(v)) => {
                println!("{}: {} violation(s)", cli.db.display(), v.len());
                for x in &v {
                    println!("  {x}");
                }
                Ok(1)
            }
            Err(e) => Err(anyhow::Error::new(e).context(format!("loading {}", cli.db.display()))),
        },
    }
}

fn join(w: &[u64]) -> String {
    w.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}
