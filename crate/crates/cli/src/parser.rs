//! Recursive-descent parser for spec files.
//!
//! An error inside a declaration is reported and parsing resumes after the
//! declaration's closing brace, so one file can yield several diagnostics.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use orbicalc_core::poly::Form;
use orbicalc_core::restrict::{PARAM_VARS, PLANE_VARS};
use orbicalc_core::{Label, MorphismPair, Multiplicity, OrbifoldP1Triple};

use crate::diagnostic::{Diagnostic, Span};
use crate::document::{
    CurveDecl, Decl, FibrationDecl, MordellDecl, MorphismDecl, ParamCurveDecl, PlaneComponentDecl,
    PlaneDecl, SpecDocument, TwoStageDecl,
};
use crate::lexer::{lex, Tok};

type PResult<T> = Result<T, Diagnostic>;

/// Parses a spec file. Returns every diagnostic found if any declaration fails.
pub fn parse(src: &str) -> Result<SpecDocument, Vec<Diagnostic>> {
    let toks = lex(src).map_err(|d| vec![d])?;
    let mut p = Parser { toks, pos: 0 };
    let mut doc = SpecDocument::default();
    let mut diags = Vec::new();
    let mut names = BTreeSet::new();
    while !p.at(&Tok::Eof) {
        let start = p.pos;
        let span = p.span();
        match p.declaration() {
            Ok(decl) => {
                if !names.insert(decl.name().to_string()) {
                    diags.push(Diagnostic::error(span, format!("duplicate declaration `{}`", decl.name())));
                } else {
                    doc.decls.push(decl);
                    doc.spans.push(span);
                }
            }
            Err(d) => {
                diags.push(d);
                p.recover(start);
            }
        }
    }
    diags.extend(cross_references(&doc));
    if diags.is_empty() {
        Ok(doc)
    } else {
        Err(diags)
    }
}

fn cross_references(doc: &SpecDocument) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (decl, span) in doc.decls.iter().zip(&doc.spans) {
        if let Decl::TwoStage(ts) = decl {
            match doc.fibration(&ts.upper) {
                Ok(upper) => {
                    if let Err(e) = ts.to_data(upper) {
                        out.push(Diagnostic::error(*span, format!("twostage `{}`: {e}", ts.name)));
                    }
                }
                Err(e) => out.push(Diagnostic::error(*span, format!("twostage `{}`: {e}", ts.name))),
            }
        }
    }
    out
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn at(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn next(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if t.0 != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, what: &str) -> Diagnostic {
        Diagnostic::error(self.span(), format!("expected {what}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, t: Tok) -> PResult<Span> {
        if self.at(&t) {
            Ok(self.next().1)
        } else {
            Err(self.unexpected(&t.describe()))
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.next();
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        if self.at_keyword(kw) {
            self.next();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn integer(&mut self, what: &str) -> PResult<(BigInt, Span)> {
        match self.peek().clone() {
            Tok::Int(n) => Ok((n, self.next().1)),
            _ => Err(self.unexpected(what)),
        }
    }

    fn small<T: TryFrom<u64>>(&mut self, what: &str) -> PResult<T> {
        let (n, span) = self.integer(what)?;
        n.to_u64()
            .and_then(|v| T::try_from(v).ok())
            .ok_or_else(|| Diagnostic::error(span, format!("{what} `{n}` is out of range")))
    }

    fn positive(&mut self, what: &str) -> PResult<u64> {
        let span = self.span();
        let v: u64 = self.small(what)?;
        if v == 0 {
            return Err(Diagnostic::error(span, format!("{what} must be at least 1")));
        }
        Ok(v)
    }

    /// `inf`, an integer, `a/b`, or a decimal.
    fn multiplicity(&mut self) -> PResult<Multiplicity> {
        let span = self.span();
        if self.at_keyword("inf") {
            self.next();
            return Ok(Multiplicity::infinity());
        }
        let value = self.rational_literal().ok_or_else(|| self.unexpected("a multiplicity"))??;
        Multiplicity::new(value).map_err(|e| Diagnostic::error(span, e.to_string()))
    }

    /// `None` if the next token does not start a number.
    fn rational_literal(&mut self) -> Option<PResult<BigRational>> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                if self.at(&Tok::Slash) {
                    self.next();
                    return Some(self.integer("a denominator").and_then(|(d, span)| {
                        if d.is_zero() {
                            Err(Diagnostic::error(span, "zero denominator"))
                        } else {
                            Ok(BigRational::new(n, d))
                        }
                    }));
                }
                Some(Ok(BigRational::from_integer(n)))
            }
            Tok::Decimal(s) => {
                self.next();
                let (whole, frac) = s.split_once('.').expect("decimal point");
                let digits: BigInt = format!("{whole}{frac}").parse().expect("digits");
                let scale = BigInt::from(10u32).pow(frac.len() as u32);
                Some(Ok(BigRational::new(digits, scale)))
            }
            _ => None,
        }
    }

    fn end_item(&mut self) -> PResult<()> {
        self.expect(Tok::Semi).map(|_| ())
    }

    /// Skips to just past the closing brace of the declaration that began at `start`.
    fn recover(&mut self, start: usize) {
        let mut i = start;
        let mut depth = 0usize;
        let mut opened = false;
        while i < self.toks.len() {
            match self.toks[i].0 {
                Tok::LBrace => {
                    depth += 1;
                    opened = true;
                }
                Tok::RBrace if depth > 0 => {
                    depth -= 1;
                    if depth == 0 && opened {
                        i += 1;
                        break;
                    }
                }
                Tok::Eof => break,
                _ => {}
            }
            i += 1;
        }
        self.pos = i.max(self.pos).min(self.toks.len() - 1);
        if self.pos == start && !self.at(&Tok::Eof) {
            self.pos += 1;
        }
    }

    fn declaration(&mut self) -> PResult<Decl> {
        let kw = self.ident("a declaration keyword")?;
        let name = self.ident("a declaration name")?;
        self.expect(Tok::LBrace)?;
        let decl = match kw.as_str() {
            "curve" => Decl::Curve(self.curve(name)?),
            "plane" => Decl::Plane(self.plane(name)?),
            "fibration" => Decl::Fibration(self.fibration(name)?),
            "twostage" => Decl::TwoStage(self.twostage(name)?),
            "morphism" => Decl::Morphism(self.morphism(name)?),
            "paramcurve" => Decl::ParamCurve(self.paramcurve(name)?),
            "mordell" => Decl::Mordell(self.mordell(name)?),
            other => {
                return Err(Diagnostic::error(
                    self.toks[self.pos - 3].1,
                    format!("unknown declaration keyword `{other}`"),
                ))
            }
        };
        self.expect(Tok::RBrace)?;
        Ok(decl)
    }

    fn label_set_check(seen: &mut BTreeSet<String>, label: &str, span: Span) -> PResult<()> {
        if seen.insert(label.to_string()) {
            Ok(())
        } else {
            Err(Diagnostic::error(span, format!("duplicate label `{label}`")))
        }
    }

    fn curve(&mut self, name: String) -> PResult<CurveDecl> {
        let mut genus = None;
        let mut points = Vec::new();
        let mut seen = BTreeSet::new();
        while !self.at(&Tok::RBrace) {
            let span = self.span();
            if self.at_keyword("genus") {
                self.next();
                if genus.is_some() {
                    return Err(Diagnostic::error(span, "genus given twice"));
                }
                genus = Some(self.small("a genus")?);
            } else if self.at_keyword("point") {
                self.next();
                let span = self.span();
                let label = self.ident("a point label")?;
                Self::label_set_check(&mut seen, &label, span)?;
                self.keyword("mult")?;
                points.push((label, self.multiplicity()?));
            } else {
                return Err(self.unexpected("`genus` or `point`"));
            }
            self.end_item()?;
        }
        Ok(CurveDecl { name, genus: genus.unwrap_or(0), points })
    }

    fn plane(&mut self, name: String) -> PResult<PlaneDecl> {
        let mut components = Vec::new();
        let mut seen = BTreeSet::new();
        while !self.at(&Tok::RBrace) {
            self.keyword("component")?;
            let span = self.span();
            let label = self.ident("a component label")?;
            Self::label_set_check(&mut seen, &label, span)?;
            self.keyword("degree")?;
            let degree: u32 = self.positive("a degree")?.try_into().map_err(|_| {
                Diagnostic::error(span, "degree out of range")
            })?;
            self.keyword("mult")?;
            let mult = self.multiplicity()?;
            let form = if self.at_keyword("form") {
                self.next();
                let span = self.span();
                let form = self.poly(&PLANE_VARS)?;
                match form.homogeneous_degree() {
                    Some(d) if d == degree => {}
                    Some(d) => {
                        return Err(Diagnostic::error(
                            span,
                            format!("form of `{label}` has degree {d}, declared {degree}"),
                        ))
                    }
                    None => {
                        return Err(Diagnostic::error(
                            span,
                            format!("form of `{label}` is zero or not homogeneous"),
                        ))
                    }
                }
                Some(form)
            } else {
                None
            };
            self.end_item()?;
            components.push(PlaneComponentDecl { label, degree, mult, form });
        }
        Ok(PlaneDecl { name, components })
    }

    fn fibration(&mut self, name: String) -> PResult<FibrationDecl> {
        let mut fibers = Vec::new();
        let mut seen = BTreeSet::new();
        while !self.at(&Tok::RBrace) {
            self.keyword("over")?;
            let span = self.span();
            let label = self.ident("a fibre label")?;
            Self::label_set_check(&mut seen, &label, span)?;
            self.expect(Tok::LBrace)?;
            let mut parts = Vec::new();
            while !self.at(&Tok::RBrace) {
                self.keyword("part")?;
                self.keyword("t")?;
                let t = self.positive("a coefficient t")?;
                self.keyword("mult")?;
                parts.push((t, self.multiplicity()?));
                self.end_item()?;
            }
            self.expect(Tok::RBrace)?;
            self.eat(&Tok::Semi);
            if parts.is_empty() {
                return Err(Diagnostic::error(span, format!("fibre over `{label}` has no components")));
            }
            fibers.push((label, parts));
        }
        Ok(FibrationDecl { name, fibers })
    }

    fn twostage(&mut self, name: String) -> PResult<TwoStageDecl> {
        let mut lower = Vec::new();
        let mut upper = None;
        let mut seen = BTreeSet::new();
        while !self.at(&Tok::RBrace) {
            let span = self.span();
            if self.at_keyword("upper") {
                self.next();
                self.expect(Tok::Eq)?;
                if upper.is_some() {
                    return Err(Diagnostic::error(span, "upper given twice"));
                }
                upper = Some(self.ident("a fibration name")?);
                self.eat(&Tok::Semi);
                continue;
            }
            self.keyword("lower")?;
            let span = self.span();
            let label = self.ident("a divisor label")?;
            Self::label_set_check(&mut seen, &label, span)?;
            self.expect(Tok::LBrace)?;
            let mut terms = Vec::new();
            while !self.at(&Tok::RBrace) {
                self.keyword("s")?;
                let s = self.positive("a coefficient s")?;
                self.expect(Tok::Arrow)?;
                terms.push((s, self.ident("a fibre label")?));
                self.end_item()?;
            }
            self.expect(Tok::RBrace)?;
            self.eat(&Tok::Semi);
            if terms.is_empty() {
                return Err(Diagnostic::error(span, format!("`{label}` has no terms")));
            }
            lower.push((label, terms));
        }
        let upper = upper.ok_or_else(|| Diagnostic::error(self.span(), "missing `upper = <fibration>`"))?;
        Ok(TwoStageDecl { name, lower, upper })
    }

    fn marks_block(&mut self) -> PResult<Vec<(Label, Multiplicity)>> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        while !self.at(&Tok::RBrace) {
            let span = self.span();
            let label = self.ident("a divisor label")?;
            Self::label_set_check(&mut seen, &label, span)?;
            self.keyword("mult")?;
            out.push((label, self.multiplicity()?));
            self.end_item()?;
        }
        self.expect(Tok::RBrace)?;
        self.eat(&Tok::Semi);
        Ok(out)
    }

    fn morphism(&mut self, name: String) -> PResult<MorphismDecl> {
        let mut pairs = Vec::new();
        let (mut dx, mut dy) = (None, None);
        while !self.at(&Tok::RBrace) {
            let span = self.span();
            if self.at_keyword("pair") {
                self.next();
                let y_label = self.ident("a divisor label on the target")?;
                let x_label = self.ident("a divisor label on the source")?;
                self.keyword("t")?;
                let t = self.positive("a coefficient t")?;
                self.end_item()?;
                pairs.push(MorphismPair { y_label, x_label, t });
            } else if self.at_keyword("dX") {
                self.next();
                if dx.replace(self.marks_block()?).is_some() {
                    return Err(Diagnostic::error(span, "dX given twice"));
                }
            } else if self.at_keyword("dY") {
                self.next();
                if dy.replace(self.marks_block()?).is_some() {
                    return Err(Diagnostic::error(span, "dY given twice"));
                }
            } else {
                return Err(self.unexpected("`pair`, `dX` or `dY`"));
            }
        }
        Ok(MorphismDecl {
            name,
            pairs,
            delta_x: dx.unwrap_or_default(),
            delta_y: dy.unwrap_or_default(),
        })
    }

    fn paramcurve(&mut self, name: String) -> PResult<ParamCurveDecl> {
        let mut coords: [Option<Form>; 3] = [None, None, None];
        let start = self.span();
        while !self.at(&Tok::RBrace) {
            let span = self.span();
            let var = self.ident("`x0`, `x1` or `x2`")?;
            let i = PLANE_VARS
                .iter()
                .position(|v| *v == var)
                .ok_or_else(|| Diagnostic::error(span, format!("expected `x0`, `x1` or `x2`, found `{var}`")))?;
            self.expect(Tok::Eq)?;
            if coords[i].is_some() {
                return Err(Diagnostic::error(span, format!("`{var}` given twice")));
            }
            coords[i] = Some(self.poly(&PARAM_VARS)?);
            self.end_item()?;
        }
        let [Some(a), Some(b), Some(c)] = coords else {
            return Err(Diagnostic::error(start, "paramcurve needs `x0`, `x1` and `x2`"));
        };
        let decl = ParamCurveDecl { name, coords: [a, b, c] };
        decl.to_curve().map_err(|e| Diagnostic::error(start, e.to_string()))?;
        Ok(decl)
    }

    fn mordell(&mut self, name: String) -> PResult<MordellDecl> {
        let mut vals: [Option<u32>; 3] = [None, None, None];
        let start = self.span();
        while !self.at(&Tok::RBrace) {
            let span = self.span();
            let key = self.ident("`p`, `q` or `r`")?;
            let i = ["p", "q", "r"]
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| Diagnostic::error(span, format!("expected `p`, `q` or `r`, found `{key}`")))?;
            if vals[i].is_some() {
                return Err(Diagnostic::error(span, format!("`{key}` given twice")));
            }
            vals[i] = Some(self.small("a multiplicity")?);
            self.end_item()?;
        }
        let [Some(p), Some(q), Some(r)] = vals else {
            return Err(Diagnostic::error(start, "mordell needs `p`, `q` and `r`"));
        };
        let triple = OrbifoldP1Triple::new(p, q, r).map_err(|e| Diagnostic::error(start, e.to_string()))?;
        Ok(MordellDecl { name, triple })
    }

    /// `expr := ['-'] term (('+' | '-') term)*`
    fn poly(&mut self, vars: &[&str]) -> PResult<Form> {
        let mut acc = if self.eat(&Tok::Minus) {
            self.term(vars)?.neg()
        } else {
            self.term(vars)?
        };
        loop {
            if self.eat(&Tok::Plus) {
                acc = acc.add(&self.term(vars)?);
            } else if self.eat(&Tok::Minus) {
                acc = acc.sub(&self.term(vars)?);
            } else {
                return Ok(acc);
            }
        }
    }

    /// `term := factor ('*' factor)*`
    fn term(&mut self, vars: &[&str]) -> PResult<Form> {
        let mut acc = self.factor(vars)?;
        while self.eat(&Tok::Star) {
            acc = acc.mul(&self.factor(vars)?);
        }
        Ok(acc)
    }

    /// `factor := atom ['^' int]`
    fn factor(&mut self, vars: &[&str]) -> PResult<Form> {
        let base = self.atom(vars)?;
        if self.eat(&Tok::Caret) {
            let e: u32 = self.small("an exponent")?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    /// `atom := number | var | '(' expr ')'`
    fn atom(&mut self, vars: &[&str]) -> PResult<Form> {
        if let Some(c) = self.rational_literal() {
            return Ok(Form::constant(vars, c?));
        }
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.next();
                let i = vars.iter().position(|v| *v == name).ok_or_else(|| {
                    Diagnostic::error(span, format!("unknown variable `{name}`, expected one of {}", vars.join(", ")))
                })?;
                Ok(Form::var(vars, i))
            }
            Tok::LParen => {
                self.next();
                let inner = self.poly(vars)?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.unexpected("a polynomial term")),
        }
    }
}
