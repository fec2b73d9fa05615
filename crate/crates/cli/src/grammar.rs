//! Text forms for symbols and inner functions.
//!
//! ```text
//! laurent: -1:1,0,0.5+2i          coefficients from index -1 upward
//! rational: (z+0.5)/(z^2-(0.1+0.2i))
//! blaschke: 0.5, 0.3i, atom@1.5:0.8
//! <symbol> | times: eta_bar theta
//! ```

use hardyops::{Atom, CoeffSeries, InnerFunction, RationalSymbol, Symbol, C64};

use crate::error::CliError;

fn bad(what: &str, text: &str, why: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("invalid {what} '{text}': {why}"))
}

/// Complex literal: `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`, exponents allowed.
pub fn parse_complex(text: &str) -> Result<C64, CliError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = |why: &str| bad("complex literal", text, why);
    if s.is_empty() {
        return Err(err("empty"));
    }
    let real = |t: &str| t.parse::<f64>().map_err(|_| err("not a number"));
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(C64::new(real(&s)?, 0.0));
    };
    // Split at the last sign that is not a leading sign or part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => real(t)?,
    };
    Ok(C64::new(re, im))
}

/// Polynomial in `z`, e.g. `2z^2 - (1+i)z + 0.5`. Returns coefficients low → high.
pub fn parse_polynomial(text: &str) -> Result<Vec<C64>, CliError> {
    let s: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = |why: &str| bad("polynomial", text, why);
    if s.is_empty() {
        return Err(err("empty"));
    }
    // Split into signed terms at top-level signs that do not follow an exponent marker.
    let mut terms: Vec<String> = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for (k, &ch) in s.iter().enumerate() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let prev = if k > 0 { Some(s[k - 1]) } else { None };
        let boundary = depth == 0 && (ch == '+' || ch == '-') && k > 0 && !matches!(prev, Some('e' | 'E' | '^'));
        if boundary {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    if depth != 0 {
        return Err(err("unbalanced parentheses"));
    }
    terms.push(cur);

    let mut coeffs: Vec<C64> = Vec::new();
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(rest) => (-1.0, rest.to_string()),
            None => (1.0, term.trim_start_matches('+').to_string()),
        };
        let (coef_text, power) = match body.find('z') {
            Some(k) => {
                let tail = &body[k + 1..];
                let power = if tail.is_empty() {
                    1
                } else {
                    tail.strip_prefix('^')
                        .and_then(|p| p.parse::<usize>().ok())
                        .ok_or_else(|| err("expected z^k with k ≥ 0"))?
                };
                (body[..k].trim_end_matches('*').to_string(), power)
            }
            None => (body.clone(), 0),
        };
        let coef_text = coef_text.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(&coef_text);
        let coef = match coef_text {
            "" => C64::new(1.0, 0.0),
            t => parse_complex(t)?,
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, C64::new(0.0, 0.0));
        }
        coeffs[power] += sign * coef;
    }
    Ok(coeffs)
}

fn split_kind<'a>(text: &'a str, what: &str) -> Result<(&'a str, &'a str), CliError> {
    let (kind, body) = text.split_once(':').ok_or_else(|| bad(what, text, "expected '<kind>: ...'"))?;
    Ok((kind.trim(), body.trim()))
}

/// `blaschke: a1, a2, ..., atom@angle:mass`. An empty list is the constant 1.
pub fn parse_inner(text: &str) -> Result<InnerFunction, CliError> {
    let (kind, body) = split_kind(text, "inner function")?;
    if kind != "blaschke" {
        return Err(bad("inner function", text, "expected 'blaschke:'"));
    }
    let mut zeros = Vec::new();
    let mut atoms = Vec::new();
    for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some(atom) = item.strip_prefix("atom@") {
            let (angle, mass) = atom.split_once(':').ok_or_else(|| bad("atom", item, "expected atom@angle:mass"))?;
            let angle = angle.trim().parse::<f64>().map_err(|e| bad("atom angle", item, e))?;
            let mass = mass.trim().parse::<f64>().map_err(|e| bad("atom mass", item, e))?;
            atoms.push(Atom { angle, mass });
        } else {
            zeros.push(parse_complex(item)?);
        }
    }
    InnerFunction::new(C64::new(1.0, 0.0), zeros, atoms).map_err(|e| bad("inner function", text, e))
}

fn parse_base(text: &str) -> Result<Symbol, CliError> {
    let (kind, body) = split_kind(text, "symbol")?;
    match kind {
        "laurent" => {
            let (lo, coeffs) = body.split_once(':').ok_or_else(|| bad("laurent symbol", text, "expected lo:c,c,..."))?;
            let lo = lo.trim().parse::<i64>().map_err(|e| bad("laurent symbol", text, e))?;
            let coeffs = coeffs.split(',').map(parse_complex).collect::<Result<Vec<_>, _>>()?;
            Ok(Symbol::laurent(CoeffSeries::new(lo, coeffs, 0.0)))
        }
        "rational" => {
            let (num, den) = split_fraction(body).ok_or_else(|| bad("rational symbol", text, "expected (num)/(den)"))?;
            let r = RationalSymbol::from_polys(&parse_polynomial(num)?, &parse_polynomial(den)?)
                .map_err(|e| bad("rational symbol", text, e))?;
            Ok(Symbol::rational(r))
        }
        _ => Err(bad("symbol", text, "expected 'laurent:' or 'rational:'")),
    }
}

fn strip_parens(t: &str) -> Option<&str> {
    t.trim().strip_prefix('(')?.strip_suffix(')')
}

/// Split `(num)/(den)` at the top-level slash.
fn split_fraction(body: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (k, ch) in body.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => {
                return Some((strip_parens(&body[..k])?, strip_parens(&body[k + 1..])?));
            }
            _ => {}
        }
    }
    None
}

/// A symbol, optionally followed by `| times: f1 f2 ...` where each factor is
/// one of `eta`, `theta` with an optional `_bar`, `_star` or `_breve` suffix.
pub fn parse_symbol(text: &str, eta: &InnerFunction, theta: &InnerFunction) -> Result<Symbol, CliError> {
    let (base, times) = match text.split_once('|') {
        Some((b, t)) => (b, Some(t)),
        None => (text, None),
    };
    let mut symbol = parse_base(base.trim())?;
    if let Some(t) = times {
        let (kind, list) = split_kind(t.trim(), "factor list")?;
        if kind != "times" {
            return Err(bad("factor list", t, "expected 'times:'"));
        }
        for name in list.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
            let (root, suffix) = name.split_once('_').unwrap_or((name, ""));
            let f = match root {
                "eta" => eta,
                "theta" => theta,
                _ => return Err(bad("factor", name, "expected eta or theta")),
            };
            symbol = match suffix {
                "" => symbol.times_inner(f, 1),
                "bar" => symbol.times_inner(f, -1),
                "star" => symbol.times_inner(&f.star(), 1),
                "breve" => symbol.times_inner(&f.star(), -1),
                _ => return Err(bad("factor", name, "suffix must be bar, star or breve")),
            };
        }
    }
    Ok(symbol)
}
