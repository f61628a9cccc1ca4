//! Concrete grammars of the instances.

use super::lexer::Tok;
use super::parse::{Parser, Surface};
use super::ParseError;
use crate::instances::hopi::{Hopi, HopiAssertion, HopiCondition, HopiTerm, HopiType};
use crate::instances::hopi2::{Hopi2Process, Hopi2Type};
use crate::instances::rho::{RhoName, RhoProcess, RhoType};
use crate::typing::TypeEnv;

// ---------------------------------------------------------------------------
// HOπ: the generic grammar

pub struct HopiSurface;

impl Surface for HopiSurface {
    type L = Hopi;

    fn term(p: &mut Parser) -> Result<HopiTerm, ParseError> {
        if p.eat("{") {
            let q = p.process::<Self>()?;
            p.expect("}")?;
            return Ok(HopiTerm::proc(q));
        }
        let x = p.ident()?;
        Ok(HopiTerm::Name(p.name(&x)))
    }

    fn ty(p: &mut Parser) -> Result<HopiType, ParseError> {
        match p.bump() {
            Some(Tok::Ident(k)) if k == "ch" => {
                p.expect("(")?;
                let t = Self::ty(p)?;
                p.expect(")")?;
                Ok(HopiType::ch(t))
            }
            Some(Tok::Ident(k)) if k == "drop" => {
                p.expect("(")?;
                let env = hopi_env(p, ")")?;
                p.expect(")")?;
                Ok(HopiType::Drop(env))
            }
            _ => {
                p.retreat();
                Err(p.error("expected a type `ch(T)` or `drop(x:T, ...)`"))
            }
        }
    }

    fn condition(p: &mut Parser) -> Result<HopiCondition, ParseError> {
        if p.is_ident("true") {
            p.bump();
            return Ok(HopiCondition::Top);
        }
        let a = Self::term(p)?;
        if p.eat("<=") {
            let b = Self::term(p)?;
            return match (a, b) {
                (HopiTerm::Proc(a), HopiTerm::Proc(b)) => Ok(HopiCondition::Handle(a, b)),
                _ => Err(p.error("both sides of `<=` must be processes `{P}`")),
            };
        }
        p.expect("<->")?;
        Ok(HopiCondition::ChanEq(a, Self::term(p)?))
    }

    fn assertion(p: &mut Parser) -> Result<HopiAssertion, ParseError> {
        if matches!(p.peek(), Some(Tok::Int(1))) {
            p.bump();
            return Ok(HopiAssertion::empty());
        }
        let items = p.list(",", "|)", |p| {
            p.expect("{")?;
            let q = p.process::<Self>()?;
            p.expect("}")?;
            p.expect(":")?;
            Ok((q, Self::ty(p)?))
        })?;
        Ok(HopiAssertion(items.into_iter().collect()))
    }
}

fn hopi_env(p: &mut Parser, close: &str) -> Result<TypeEnv<HopiType>, ParseError> {
    let items = p.list(",", close, |p| {
        let x = p.ident()?;
        let x = p.name(&x);
        p.expect(":")?;
        Ok((x, HopiSurface::ty(p)?))
    })?;
    env_of(p, items)
}

fn env_of<T: Ord + Clone + std::fmt::Display>(
    p: &Parser,
    items: Vec<(crate::nominal::Name, T)>,
) -> Result<TypeEnv<T>, ParseError> {
    TypeEnv::new().extend_all(&items).map_err(|e| p.error(e))
}

// ---------------------------------------------------------------------------
// HOπ₂

pub fn hopi2_process(p: &mut Parser) -> Result<Hopi2Process, ParseError> {
    let mut items = vec![hopi2_atom(p)?];
    while p.eat("|") {
        items.push(hopi2_atom(p)?);
    }
    let last = items.pop().expect("one atom");
    Ok(items.into_iter().rev().fold(last, |acc, q| Hopi2Process::par(q, acc)))
}

fn hopi2_atom(p: &mut Parser) -> Result<Hopi2Process, ParseError> {
    match p.peek() {
        Some(Tok::Int(0)) => {
            p.bump();
            Ok(Hopi2Process::Nil)
        }
        Some(Tok::Sym("'")) => {
            p.bump();
            let a = p.ident()?;
            let a = p.name(&a);
            p.expect("<")?;
            let q = hopi2_process(p)?;
            p.expect(">")?;
            p.expect(".")?;
            Ok(Hopi2Process::output(a, q, hopi2_atom(p)?))
        }
        Some(Tok::Sym("(")) if matches!(p.peek_at(1), Some(Tok::Ident(k)) if k == "new") => {
            p.bump();
            p.bump();
            let a = p.ident()?;
            let a = p.name(&a);
            p.expect(":")?;
            let t = hopi2_type(p)?;
            p.expect(")")?;
            Ok(Hopi2Process::restrict(a, t, hopi2_atom(p)?))
        }
        Some(Tok::Sym("(")) => {
            p.bump();
            let q = hopi2_process(p)?;
            p.expect(")")?;
            Ok(q)
        }
        _ => {
            let a = p.ident()?;
            let a = p.name(&a);
            if !p.eat("(") {
                return Ok(Hopi2Process::Var(a));
            }
            let x = p.ident()?;
            let x = p.name(&x);
            p.expect(")")?;
            p.expect(".")?;
            Ok(Hopi2Process::input(a, x, hopi2_atom(p)?))
        }
    }
}

/// `n`, `ch^k`, `ch+^k` or `ch-^k`.
pub fn hopi2_type(p: &mut Parser) -> Result<Hopi2Type, ParseError> {
    if let Some(Tok::Int(_)) = p.peek() {
        return Ok(Hopi2Type::Level(p.int()?));
    }
    p.expect_keyword("ch")?;
    let make: fn(u32) -> Hopi2Type = if p.eat("+") {
        Hopi2Type::ChOut
    } else if p.eat("-") {
        Hopi2Type::ChIn
    } else {
        Hopi2Type::Ch
    };
    p.expect("^")?;
    Ok(make(p.int()?))
}

// ---------------------------------------------------------------------------
// ρ

pub fn rho_process(p: &mut Parser) -> Result<RhoProcess, ParseError> {
    let mut items = vec![rho_atom(p)?];
    while p.eat("|") {
        items.push(rho_atom(p)?);
    }
    let last = items.pop().expect("one atom");
    Ok(items.into_iter().rev().fold(last, |acc, q| RhoProcess::par(q, acc)))
}

fn rho_atom(p: &mut Parser) -> Result<RhoProcess, ParseError> {
    match p.peek() {
        Some(Tok::Int(0)) => {
            p.bump();
            Ok(RhoProcess::Nil)
        }
        Some(Tok::Sym("*")) => {
            p.bump();
            Ok(RhoProcess::Drop(rho_name(p)?))
        }
        Some(Tok::Sym("(")) => {
            p.bump();
            let q = rho_process(p)?;
            p.expect(")")?;
            Ok(q)
        }
        Some(Tok::Sym("@")) => {
            let x = rho_name(p)?;
            if p.eat("!") {
                p.expect("(")?;
                let q = rho_process(p)?;
                let t = if p.eat(":") { Some(rho_type(p)?) } else { None };
                p.expect(")")?;
                Ok(RhoProcess::Lift(x, Box::new(q), t))
            } else if p.eat("?") {
                p.expect("(")?;
                let y = rho_name(p)?;
                let t = if p.eat(":") { Some(rho_type(p)?) } else { None };
                p.expect(")")?;
                p.expect(".")?;
                Ok(RhoProcess::Input(x, y, t, Box::new(rho_atom(p)?)))
            } else {
                Err(p.error("expected `!` or `?` after a subject name"))
            }
        }
        _ => Err(p.error(match p.peek() {
            Some(t) => format!("expected a process, found {t}"),
            None => "expected a process, found end of input".to_string(),
        })),
    }
}

/// `@0`, `@*x` or `@(P)`.
pub fn rho_name(p: &mut Parser) -> Result<RhoName, ParseError> {
    p.expect("@")?;
    match p.peek() {
        Some(Tok::Int(0)) => {
            p.bump();
            Ok(RhoName::zero())
        }
        Some(Tok::Sym("*")) => {
            p.bump();
            Ok(RhoName::quote(RhoProcess::Drop(rho_name(p)?)))
        }
        Some(Tok::Sym("(")) => {
            p.bump();
            let q = rho_process(p)?;
            p.expect(")")?;
            Ok(RhoName::quote(q))
        }
        _ => Err(p.error("expected `0`, `*x` or `(P)` after `@`")),
    }
}

/// `<T, {Γ}>` or `<B, {Γ}>`.
pub fn rho_type(p: &mut Parser) -> Result<RhoType, ParseError> {
    p.expect("<")?;
    let carried = if p.is_ident("B") {
        p.bump();
        None
    } else {
        Some(rho_type(p)?)
    };
    p.expect(",")?;
    p.expect("{")?;
    let items = p.list(",", "}", |p| {
        let x = p.ident()?;
        let x = p.name(&x);
        p.expect(":")?;
        Ok((x, rho_type(p)?))
    })?;
    let env = env_of(p, items)?;
    p.expect("}")?;
    p.expect(">")?;
    Ok(match carried {
        Some(t) => RhoType::Pair(Box::new(t), env),
        None => RhoType::Base(env),
    })
}
