//! Source files: an optional header of `instance`, `type` and `assert`
//! lines followed by one process.
//!
//! ```text
//! instance hopi
//! type a : ch(drop())
//! assert {0} : drop()
//! 'a<{0}>.0 | a(\x:drop())x.run x
//! ```

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use super::grammars::{hopi2_process, hopi2_type, rho_name, rho_process, rho_type, HopiSurface};
use super::parse::{Parser, Surface};
use super::ParseError;
use crate::instances::hopi::{HopiAssertion, HopiProcess, HopiType};
use crate::instances::hopi2::{Hopi2Process, Hopi2Type};
use crate::instances::rho::{RhoName, RhoProcess, RhoType};
use crate::nominal::Name;
use crate::typing::TypeEnv;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum Instance {
    Hopi,
    Hopi2,
    Rho,
    RhoTyped,
}

impl Instance {
    pub fn tag(self) -> &'static str {
        match self {
            Instance::Hopi => "hopi",
            Instance::Hopi2 => "hopi2",
            Instance::Rho => "rho",
            Instance::RhoTyped => "rho-typed",
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Instance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "hopi" => Ok(Instance::Hopi),
            "hopi2" => Ok(Instance::Hopi2),
            "rho" => Ok(Instance::Rho),
            "rho-typed" => Ok(Instance::RhoTyped),
            other => Err(format!("unknown instance `{other}`")),
        }
    }
}

/// A parsed source file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Program {
    Hopi { env: TypeEnv<HopiType>, assertion: Option<HopiAssertion>, body: HopiProcess },
    Hopi2 { env: TypeEnv<Hopi2Type>, body: Hopi2Process },
    Rho { body: RhoProcess },
    /// `declared` holds the static name types of the preamble.
    RhoTyped { declared: Vec<(RhoName, RhoType)>, body: RhoProcess },
}

impl Program {
    pub fn instance(&self) -> Instance {
        match self {
            Program::Hopi { .. } => Instance::Hopi,
            Program::Hopi2 { .. } => Instance::Hopi2,
            Program::Rho { .. } => Instance::Rho,
            Program::RhoTyped { .. } => Instance::RhoTyped,
        }
    }
}

/// Prints the canonical source text, header included.
impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "instance {}", self.instance())?;
        match self {
            Program::Hopi { env, assertion, body } => {
                for (x, t) in env.iter() {
                    writeln!(f, "type {x} : {t}")?;
                }
                if let Some(a) = assertion {
                    writeln!(f, "assert {a}")?;
                }
                writeln!(f, "{body}")
            }
            Program::Hopi2 { env, body } => {
                for (x, t) in env.iter() {
                    writeln!(f, "type {x} : {t}")?;
                }
                writeln!(f, "{body}")
            }
            Program::Rho { body } => writeln!(f, "{body}"),
            Program::RhoTyped { declared, body } => {
                for (x, t) in declared {
                    writeln!(f, "type {x} : {t}")?;
                }
                writeln!(f, "{body}")
            }
        }
    }
}

enum Header {
    Instance(String, usize),
    Type(String, usize),
    Assert(String, usize),
}

/// The line with `k` blanked out, so that columns stay those of the file.
fn strip_keyword(line: &str, k: &str) -> Option<String> {
    let t = line.trim_start();
    let rest = t.strip_prefix(k)?;
    (rest.is_empty() || rest.starts_with(char::is_whitespace))
        .then(|| format!("{}{rest}", " ".repeat(line.len() - rest.len())))
}

/// Parses a source file. `forced` is the instance given on the command
/// line; it must agree with an `instance` header when both are present.
pub fn parse_source(src: &str, forced: Option<Instance>) -> Result<Program, ParseError> {
    parse_source_or(src, forced, None)
}

/// As [`parse_source`], using `fallback` when neither the command line nor
/// the header names an instance.
pub fn parse_source_or(src: &str, forced: Option<Instance>, fallback: Option<Instance>) -> Result<Program, ParseError> {
    let lines: Vec<&str> = src.lines().collect();
    let mut headers = Vec::new();
    let mut body_start = lines.len();
    for (i, line) in lines.iter().enumerate() {
        let t = line.trim_start();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if let Some(rest) = strip_keyword(line, "instance") {
            headers.push(Header::Instance(rest, i + 1));
        } else if let Some(rest) = strip_keyword(line, "type") {
            headers.push(Header::Type(rest, i + 1));
        } else if let Some(rest) = strip_keyword(line, "assert") {
            headers.push(Header::Assert(rest, i + 1));
        } else {
            body_start = i;
            break;
        }
    }
    let mut instance = None;
    for h in &headers {
        if let Header::Instance(rest, line) = h {
            let tag: Instance = rest.trim().parse().map_err(|e: String| ParseError::new(*line, 1, e))?;
            if instance.is_some_and(|i| i != tag) {
                return Err(ParseError::new(*line, 1, "instance declared twice".into()));
            }
            instance = Some(tag);
        }
    }
    let instance = match (forced, instance) {
        (Some(f), Some(d)) if f != d => {
            return Err(ParseError::new(1, 1, format!("file declares instance {d} but {f} was requested")))
        }
        (Some(i), _) | (None, Some(i)) => i,
        (None, None) if fallback.is_some() => fallback.expect("checked"),
        (None, None) => {
            return Err(ParseError::new(1, 1, "no instance given; add `instance <tag>` or pass --instance".into()))
        }
    };
    // blank lines keep body line numbers equal to file line numbers
    let body_src = format!("{}{}", "\n".repeat(body_start), lines[body_start..].join("\n"));
    let mut names = HashMap::new();
    let sub = |text: &str, line: usize, names: &mut HashMap<String, Name>| -> Result<Parser, ParseError> {
        Ok(Parser::new(text, line)?.with_names(std::mem::take(names)))
    };
    match instance {
        Instance::Hopi => {
            let mut env = TypeEnv::new();
            let mut assertion: Option<HopiAssertion> = None;
            for h in &headers {
                match h {
                    Header::Type(rest, line) => {
                        let mut p = sub(rest, *line, &mut names)?;
                        let (x, t) = typed_name(&mut p, HopiSurface::ty)?;
                        env = env.extend(x, t).map_err(|e| ParseError::new(*line, 1, e))?;
                        names = p.into_names();
                    }
                    Header::Assert(rest, line) => {
                        let mut p = sub(rest, *line, &mut names)?;
                        let a = HopiSurface::assertion(&mut p)?;
                        p.finish()?;
                        let mut all = assertion.unwrap_or_default();
                        all.0.extend(a.0);
                        assertion = Some(all);
                        names = p.into_names();
                    }
                    Header::Instance(..) => {}
                }
            }
            let mut p = sub(&body_src, 1, &mut names)?;
            let body = p.process::<HopiSurface>()?;
            p.finish()?;
            Ok(Program::Hopi { env, assertion, body })
        }
        Instance::Hopi2 => {
            let mut env = TypeEnv::new();
            for h in &headers {
                match h {
                    Header::Type(rest, line) => {
                        let mut p = sub(rest, *line, &mut names)?;
                        let (x, t) = typed_name(&mut p, hopi2_type)?;
                        env = env.extend(x, t).map_err(|e| ParseError::new(*line, 1, e))?;
                        names = p.into_names();
                    }
                    Header::Assert(_, line) => return Err(ParseError::new(*line, 1, "hopi2 files take no assertion".into())),
                    Header::Instance(..) => {}
                }
            }
            let mut p = sub(&body_src, 1, &mut names)?;
            let body = hopi2_process(&mut p)?;
            p.finish()?;
            Ok(Program::Hopi2 { env, body })
        }
        Instance::Rho | Instance::RhoTyped => {
            let mut declared = Vec::new();
            for h in &headers {
                match h {
                    Header::Type(rest, line) if instance == Instance::RhoTyped => {
                        let mut p = sub(rest, *line, &mut names)?;
                        let x = rho_name(&mut p)?;
                        p.expect(":")?;
                        let t = rho_type(&mut p)?;
                        p.finish()?;
                        declared.push((x, t));
                        names = p.into_names();
                    }
                    Header::Type(_, line) => {
                        return Err(ParseError::new(*line, 1, "untyped rho files take no type declarations".into()))
                    }
                    Header::Assert(_, line) => return Err(ParseError::new(*line, 1, "rho files take no assertion".into())),
                    Header::Instance(..) => {}
                }
            }
            let mut p = sub(&body_src, 1, &mut names)?;
            let body = rho_process(&mut p)?;
            p.finish()?;
            Ok(match instance {
                Instance::Rho => Program::Rho { body },
                _ => Program::RhoTyped { declared, body },
            })
        }
    }
}

fn typed_name<T>(
    p: &mut Parser,
    ty: fn(&mut Parser) -> Result<T, ParseError>,
) -> Result<(Name, T), ParseError> {
    let x = p.ident()?;
    let x = p.name(&x);
    p.expect(":")?;
    let t = ty(p)?;
    p.finish()?;
    Ok((x, t))
}
