use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kalai3d_core::io::{parse_basis, parse_polytope, PolytopeFile};
use kalai3d_core::{
    brute_force_faces, certify, enumerate_faces, facets_from_vrep, generate, verify_basis,
    vertices_from_hrep, Certificate, Family, OrthoBasis, Polytope, SymmetryReport,
};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "kalai3d",
    version,
    about = "Exact face counts and 3^d certificates for symmetric polytopes"
)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Translate an H file to its vertices, or a V file to its facets.
    Convert {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print face counts by dimension.
    Fvector { input: PathBuf },
    /// Check central symmetry and mirror symmetry about a basis.
    Symmetry {
        input: PathBuf,
        /// `std` or a basis file.
        #[arg(long)]
        basis: String,
    },
    /// Build the full cone-to-face certificate.
    Certify {
        input: PathBuf,
        /// `std` or a basis file.
        #[arg(long)]
        basis: String,
    },
    /// Write a polytope from a built-in family.
    Generate {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        dim: Option<usize>,
        /// Number of generating halfspaces (random family).
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Two polytope files (product family).
        #[arg(long, num_args = 2)]
        inputs: Vec<PathBuf>,
        /// Representation to write.
        #[arg(long, value_enum, default_value_t = KindArg::H)]
        kind: KindArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run oracle-equivalence, roundtrip and certificate checks on built-in instances.
    Selftest,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum FamilyArg {
    Cube,
    CrossPolytope,
    Product,
    RandomReflectionSymmetric,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    H,
    V,
}

/// Failure modes with their exit codes.
enum Failure {
    /// Checks ran and something did not hold.
    Rejected(String),
    /// Unreadable or malformed input.
    Malformed(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Rejected(_) => 1,
            Failure::Malformed(_) => 2,
        }
    }
}

struct Report {
    stdout: String,
    status: Result<(), Failure>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = run(&cli);
    print!("{}", report.stdout);
    let _ = std::io::stdout().flush();
    match report.status {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let code = f.code();
            let (Failure::Rejected(msg) | Failure::Malformed(msg)) = f;
            if !msg.is_empty() {
                eprintln!("kalai3d: {msg}");
            }
            ExitCode::from(code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn load_file(path: &Path) -> Result<PolytopeFile, Failure> {
    parse_polytope(&read(path)?).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn load_polytope(path: &Path) -> Result<Polytope, Failure> {
    load_file(path)?
        .build()
        .map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn load_basis(spec: &str, dim: usize) -> Result<OrthoBasis, Failure> {
    if spec == "std" {
        return Ok(OrthoBasis::standard(dim));
    }
    let path = Path::new(spec);
    parse_basis(&read(path)?).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: String) -> Result<String, Failure> {
    match out {
        Some(path) => {
            fs::write(path, text)
                .map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn run(cli: &Cli) -> Report {
    let mut stdout = String::new();
    let status = dispatch(cli, &mut stdout);
    Report { stdout, status }
}

fn dispatch(cli: &Cli, out: &mut String) -> Result<(), Failure> {
    match &cli.command {
        Command::Convert { input, out: dest } => {
            let converted = match load_file(input)? {
                PolytopeFile::H(h) => PolytopeFile::V(
                    vertices_from_hrep(&h).map_err(|e| Failure::Malformed(e.to_string()))?,
                ),
                PolytopeFile::V(v) => PolytopeFile::H(
                    facets_from_vrep(&v).map_err(|e| Failure::Malformed(e.to_string()))?,
                ),
            };
            let text = if cli.json {
                pretty(&converted.to_json())
            } else {
                converted.to_text()
            };
            out.push_str(&emit(dest, text)?);
            Ok(())
        }
        Command::Fvector { input } => {
            let lattice = enumerate_faces(&load_polytope(input)?);
            if cli.json {
                out.push_str(&pretty(
                    &json!({ "f_vector": lattice.f_vector(), "total": lattice.total() }),
                ));
            } else {
                for (k, n) in lattice.f_vector().iter().enumerate() {
                    let _ = writeln!(out, "{k}: {n}");
                }
                let _ = writeln!(out, "total: {}", lattice.total());
            }
            Ok(())
        }
        Command::Symmetry { input, basis } => {
            let p = load_polytope(input)?;
            let b = load_basis(basis, p.dim())?;
            let report = verify_basis(&p, &b).map_err(|e| Failure::Malformed(e.to_string()))?;
            write_symmetry(out, &report, cli.json);
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Rejected(String::new()))
            }
        }
        Command::Certify { input, basis } => {
            let p = load_polytope(input)?;
            let b = load_basis(basis, p.dim())?;
            let cert = certify(&p, &b);
            if cli.json {
                out.push_str(&pretty(&cert.to_json()));
            } else {
                write_certificate(out, &cert);
            }
            if cert.verdict {
                Ok(())
            } else {
                Err(Failure::Rejected(String::new()))
            }
        }
        Command::Generate {
            family,
            dim,
            m,
            seed,
            inputs,
            kind,
            out: dest,
        } => {
            let need_dim = || {
                dim.ok_or_else(|| Failure::Malformed("--dim is required for this family".into()))
            };
            let p = match family {
                FamilyArg::Cube => generate(Family::Cube { dim: need_dim()? }),
                FamilyArg::CrossPolytope => generate(Family::CrossPolytope { dim: need_dim()? }),
                FamilyArg::Product => {
                    let [a, b] = inputs.as_slice() else {
                        return Err(Failure::Malformed(
                            "--inputs takes exactly two files for the product family".into(),
                        ));
                    };
                    let (a, b) = (load_polytope(a)?, load_polytope(b)?);
                    generate(Family::Product(&a, &b))
                }
                FamilyArg::RandomReflectionSymmetric => {
                    generate(Family::RandomReflectionSymmetric {
                        dim: need_dim()?,
                        generators: m.ok_or_else(|| {
                            Failure::Malformed("--m is required for the random family".into())
                        })?,
                        seed: *seed,
                    })
                }
            }
            .map_err(|e| Failure::Malformed(e.to_string()))?;
            let file = match kind {
                KindArg::H => PolytopeFile::H(p.hrep().clone()),
                KindArg::V => PolytopeFile::V(p.vrep().clone()),
            };
            let text = if cli.json {
                pretty(&file.to_json())
            } else {
                file.to_text()
            };
            out.push_str(&emit(dest, text)?);
            Ok(())
        }
        Command::Selftest => selftest(out, cli.json),
    }
}

fn write_symmetry(out: &mut String, r: &SymmetryReport, as_json: bool) {
    if as_json {
        out.push_str(&pretty(&json!({
            "centrally_symmetric": r.centrally_symmetric,
            "basis_verified": r.basis_verified,
            "failing_vector": r.failing_vector,
            "details": r.details,
        })));
        return;
    }
    let _ = writeln!(
        out,
        "centrally symmetric: {}",
        yes_no(r.centrally_symmetric)
    );
    match r.failing_vector {
        Some(i) if !r.basis_verified => {
            let _ = writeln!(out, "basis verified: no (basis vector {i})");
        }
        _ => {
            let _ = writeln!(out, "basis verified: {}", yes_no(r.basis_verified));
        }
    }
    let _ = writeln!(out, "details: {}", r.details);
}

fn write_certificate(out: &mut String, c: &Certificate) {
    let d = c.dim;
    let target = 3usize.pow(d as u32);
    let _ = writeln!(out, "dimension: {d}");
    write_symmetry(out, &c.symmetry, false);
    let fv: Vec<String> = c.f_vector.iter().map(usize::to_string).collect();
    let _ = writeln!(out, "f-vector: {}", fv.join(" "));
    let _ = writeln!(out, "total faces: {} (3^{d} = {target})", c.total);
    let found = c.witnesses.iter().filter(|w| w.face.is_some()).count();
    let lemma = c.witnesses.iter().filter(|w| w.lemma6_ok).count();
    let _ = writeln!(out, "cones: {}", c.witnesses.len());
    let _ = writeln!(out, "witness faces found: {found}");
    let _ = writeln!(out, "inclusion checks passed: {lemma}");
    let _ = writeln!(out, "injective: {}", yes_no(c.injective));
    let _ = writeln!(out, "distinct faces: {}", c.distinct_faces_count);
    let _ = writeln!(out, "verdict: {}", if c.verdict { "PASS" } else { "FAIL" });
}

fn selftest(out: &mut String, as_json: bool) -> Result<(), Failure> {
    let mut instances: Vec<(String, Polytope)> = Vec::new();
    let built = |f: Family<'_>| generate(f).expect("built-in instance");
    for d in 1..=3 {
        instances.push((format!("cube({d})"), built(Family::Cube { dim: d })));
        instances.push((
            format!("cross_polytope({d})"),
            built(Family::CrossPolytope { dim: d }),
        ));
    }
    let seg = built(Family::Cube { dim: 1 });
    let diamond = built(Family::CrossPolytope { dim: 2 });
    instances.push((
        "product(cube(1), cross_polytope(2))".into(),
        built(Family::Product(&seg, &diamond)),
    ));
    for (d, m, seed) in [(2, 2, 1), (2, 3, 7), (3, 2, 3), (3, 3, 5)] {
        instances.push((
            format!("random_reflection_symmetric(d={d}, m={m}, seed={seed})"),
            built(Family::RandomReflectionSymmetric {
                dim: d,
                generators: m,
                seed,
            }),
        ));
    }

    let mut results = Vec::new();
    for (name, p) in &instances {
        let oracle = brute_force_faces(p).is_ok_and(|l| l == enumerate_faces(p));
        let roundtrip = facets_from_vrep(p.vrep())
            .and_then(|h| vertices_from_hrep(&h))
            .is_ok_and(|v| v.vertices() == p.vertices());
        let verdict = certify(p, &OrthoBasis::standard(p.dim())).verdict;
        for (check, ok) in [
            ("oracle", oracle),
            ("roundtrip", roundtrip),
            ("certify", verdict),
        ] {
            results.push((name.clone(), check, ok));
        }
    }
    let all_ok = results.iter().all(|r| r.2);
    if as_json {
        let rows: Vec<_> = results
            .iter()
            .map(|(n, c, ok)| json!({ "instance": n, "check": c, "ok": ok }))
            .collect();
        out.push_str(&pretty(&json!({ "results": rows, "ok": all_ok })));
    } else {
        for (n, c, ok) in &results {
            let _ = writeln!(out, "{} {c:<9} {n}", if *ok { "ok  " } else { "FAIL" });
        }
        let _ = writeln!(
            out,
            "{} checks, {} failed",
            results.len(),
            results.iter().filter(|r| !r.2).count()
        );
    }
    if all_ok {
        Ok(())
    } else {
        Err(Failure::Rejected("selftest failed".into()))
    }
}
