//! Text grammar for function specs:
//!
//! ```text
//! spec   := body [ "@[" num "," num "]" ]
//! body   := "pow:r=" num | "exp" | "affine:m=" num ",c=" num
//!         | "pwl:" point { ";" point } | "neg:" body
//! point  := "(" num "," num ")"
//! ```
//!
//! Numbers are decimal or rational literals (`3/7`) and are parsed exactly.
//! The interval suffix is optional for piecewise-linear bodies, whose domain
//! is the span of the breakpoints; when given it must match that span.

use num_rational::BigRational;

use super::{parse_rational, Exponent, FunctionSpec, Interval};
use crate::error::{Error, Result};

pub fn parse_spec(text: &str) -> Result<FunctionSpec> {
    let text = text.trim();
    let (body, domain) = match text.rfind('@') {
        Some(i) => (&text[..i], Some(parse_interval(text, &text[i + 1..])?)),
        None => (text, None),
    };
    parse_body(text, body.trim(), domain.as_ref())
}

fn syntax(input: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        input: input.to_string(),
        reason: reason.into(),
    }
}

fn number(input: &str, token: &str) -> Result<BigRational> {
    parse_rational(token)
        .ok_or_else(|| syntax(input, format!("`{}` is not a number", token.trim())))
}

fn parse_interval(input: &str, text: &str) -> Result<Interval> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| syntax(input, "interval suffix must look like @[a,b]"))?;
    let (a, b) = inner
        .split_once(',')
        .ok_or_else(|| syntax(input, "interval suffix must look like @[a,b]"))?;
    Interval::new(number(input, a)?, number(input, b)?)
}

fn require_domain<'a>(
    input: &str,
    kind: &str,
    domain: Option<&'a Interval>,
) -> Result<&'a Interval> {
    domain.ok_or_else(|| syntax(input, format!("`{kind}` needs an interval suffix @[a,b]")))
}

fn parse_body(input: &str, body: &str, domain: Option<&Interval>) -> Result<FunctionSpec> {
    if let Some(rest) = body.strip_prefix("neg:") {
        return Ok(FunctionSpec::negated(parse_body(
            input,
            rest.trim(),
            domain,
        )?));
    }
    if body == "exp" {
        return Ok(FunctionSpec::exp(
            require_domain(input, "exp", domain)?.clone(),
        ));
    }
    if let Some(rest) = body.strip_prefix("pow:") {
        let r = rest
            .trim()
            .strip_prefix("r=")
            .ok_or_else(|| syntax(input, "power spec must look like pow:r=<real>"))?;
        let r = Exponent::new(number(input, r)?)?;
        return FunctionSpec::power(r, require_domain(input, "pow", domain)?.clone());
    }
    if let Some(rest) = body.strip_prefix("affine:") {
        let (mut slope, mut intercept) = (None, None);
        for field in rest.split(',') {
            let (key, value) = field.split_once('=').ok_or_else(|| {
                syntax(input, "affine spec must look like affine:m=<real>,c=<real>")
            })?;
            let slot = match key.trim() {
                "m" => &mut slope,
                "c" => &mut intercept,
                other => return Err(syntax(input, format!("unknown affine field `{other}`"))),
            };
            if slot.replace(number(input, value)?).is_some() {
                return Err(syntax(
                    input,
                    format!("duplicate affine field `{}`", key.trim()),
                ));
            }
        }
        let (Some(slope), Some(intercept)) = (slope, intercept) else {
            return Err(syntax(input, "affine spec needs both m= and c="));
        };
        return Ok(FunctionSpec::affine(
            slope,
            intercept,
            require_domain(input, "affine", domain)?.clone(),
        ));
    }
    if let Some(rest) = body.strip_prefix("pwl:") {
        let points = rest
            .split(';')
            .map(|p| {
                let (x, y) = p
                    .trim()
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .and_then(|s| s.split_once(','))
                    .ok_or_else(|| {
                        syntax(input, format!("`{}` is not a breakpoint (x,y)", p.trim()))
                    })?;
                Ok((number(input, x)?, number(input, y)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let spec = FunctionSpec::piecewise_linear(points)?;
        if let Some(d) = domain {
            if d != spec.domain() {
                return Err(Error::InvalidSpec(format!(
                    "breakpoints span {} but the interval suffix says {d}",
                    spec.domain()
                )));
            }
        }
        return Ok(spec);
    }
    Err(syntax(input, format!("unknown function kind `{body}`")))
}
