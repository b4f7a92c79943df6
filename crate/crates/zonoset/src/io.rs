//! Text formats for sets, matrices, and expressions.
//!
//! All formats are line-oriented UTF-8 with `#` comments and
//! whitespace-separated tokens; LF and CRLF are accepted and LF is emitted.
//! Numbers are printed with the shortest decimal form that parses back to
//! the identical value, so serialize-then-parse is bitwise lossless.

use std::fmt::Write as _;

use thiserror::Error;

use crate::matrix::Matrix;
use crate::rangebound::Expr;
use crate::vpoly::VPolytope;
use crate::zpoly::{IndexList, Violation, ZPolytope};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid Z-representation: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> IoError {
    IoError::Parse { line, column, message: message.into() }
}

/// One token with its 1-based position.
#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    line: usize,
    column: usize,
    text: &'a str,
}

/// Significant lines as token lists; comments and blank lines removed.
fn tokenize_lines(text: &str) -> Vec<Vec<Token<'_>>> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let mut tokens = Vec::new();
        let mut start = None;
        for (j, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            if ch.is_whitespace() {
                if let Some(s) = start.take() {
                    tokens.push(Token { line: i + 1, column: s + 1, text: &content[s..j] });
                }
            } else if start.is_none() {
                start = Some(j);
            }
        }
        if !tokens.is_empty() {
            lines.push(tokens);
        }
    }
    lines
}

fn parse_f64(tok: &Token) -> Result<f64, IoError> {
    tok.text
        .parse::<f64>()
        .map_err(|_| parse_err(tok.line, tok.column, format!("expected a number, found '{}'", tok.text)))
}

fn parse_usize(tok: &Token) -> Result<usize, IoError> {
    tok.text
        .parse::<usize>()
        .map_err(|_| parse_err(tok.line, tok.column, format!("expected an integer, found '{}'", tok.text)))
}

fn expect_keyword(line: Option<&Vec<Token>>, keyword: &str, after: usize) -> Result<(), IoError> {
    match line {
        Some(tokens) if tokens[0].text == keyword => Ok(()),
        Some(tokens) => Err(parse_err(
            tokens[0].line,
            tokens[0].column,
            format!("expected '{keyword}', found '{}'", tokens[0].text),
        )),
        None => Err(parse_err(after + 1, 1, format!("expected '{keyword}', found end of input"))),
    }
}

fn keyword_value(tokens: &[Token], keyword: &str) -> Result<usize, IoError> {
    if tokens.len() != 2 {
        let t = &tokens[0];
        return Err(parse_err(t.line, t.column, format!("'{keyword}' takes exactly one integer")));
    }
    parse_usize(&tokens[1])
}

fn float_row(tokens: &[Token], count: usize, what: &str) -> Result<Vec<f64>, IoError> {
    if tokens.len() != count + 1 {
        let t = &tokens[0];
        return Err(parse_err(
            t.line,
            t.column,
            format!("'{what}' needs exactly {count} numbers, found {}", tokens.len() - 1),
        ));
    }
    tokens[1..].iter().map(parse_f64).collect()
}

/// Shortest decimal that round-trips to the same binary value.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

fn push_floats(out: &mut String, values: &[f64]) {
    for v in values {
        let _ = write!(out, " {}", fmt_f64(*v));
    }
}

pub fn serialize_zpoly(p: &ZPolytope) -> String {
    let mut out = String::from("zpoly\n");
    let _ = writeln!(out, "dim {}", p.dim());
    let _ = writeln!(out, "factors {}", p.num_factors());
    out.push_str("center");
    push_floats(&mut out, p.center());
    out.push('\n');
    for (g, e) in p.generators().iter().zip(p.exponents()) {
        out.push_str("gen");
        push_floats(&mut out, g);
        out.push_str(" :");
        for idx in e.indices() {
            let _ = write!(out, " {idx}");
        }
        out.push('\n');
    }
    out
}

pub fn parse_zpoly(text: &str) -> Result<ZPolytope, IoError> {
    let lines = tokenize_lines(text);
    let mut it = lines.iter();
    expect_keyword(it.next(), "zpoly", 0)?;
    let dim_line = it.next();
    expect_keyword(dim_line, "dim", 1)?;
    let dim = keyword_value(dim_line.unwrap(), "dim")?;
    let factors_line = it.next();
    expect_keyword(factors_line, "factors", 2)?;
    let num_factors = keyword_value(factors_line.unwrap(), "factors")?;
    let center_line = it.next();
    expect_keyword(center_line, "center", 3)?;
    let center = float_row(center_line.unwrap(), dim, "center")?;

    let mut generators = Vec::new();
    let mut exponents = Vec::new();
    for tokens in it {
        let head = &tokens[0];
        if head.text != "gen" {
            return Err(parse_err(
                head.line,
                head.column,
                format!("expected 'gen', found '{}'", head.text),
            ));
        }
        let sep = tokens
            .iter()
            .position(|t| t.text == ":")
            .ok_or_else(|| parse_err(head.line, head.column, "'gen' line is missing ':'"))?;
        let coeffs = float_row(&tokens[..sep], dim, "gen")?;
        let index_tokens = &tokens[sep + 1..];
        if index_tokens.is_empty() {
            return Err(parse_err(head.line, head.column, "'gen' needs at least one factor index"));
        }
        let mut indices = Vec::with_capacity(index_tokens.len());
        for t in index_tokens {
            let idx = parse_usize(t)?;
            if let Some(&last) = indices.last() {
                if idx <= last {
                    return Err(parse_err(
                        t.line,
                        t.column,
                        format!("factor indices must be strictly increasing, found {idx} after {last}"),
                    ));
                }
            }
            indices.push(idx);
        }
        generators.push(coeffs);
        exponents.push(IndexList::new(indices));
    }

    let set = ZPolytope::from_raw(dim, num_factors, center, generators, exponents);
    let violations = set.validate();
    if violations.is_empty() {
        Ok(set)
    } else {
        Err(IoError::Invalid(violations))
    }
}

pub fn serialize_vpoly(p: &VPolytope) -> String {
    let mut out = String::from("vpoly\n");
    let _ = writeln!(out, "dim {}", p.dim());
    for v in p.vertices() {
        out.push_str("vertex");
        push_floats(&mut out, v);
        out.push('\n');
    }
    out
}

pub fn parse_vpoly(text: &str) -> Result<VPolytope, IoError> {
    let lines = tokenize_lines(text);
    let mut it = lines.iter();
    expect_keyword(it.next(), "vpoly", 0)?;
    let dim_line = it.next();
    expect_keyword(dim_line, "dim", 1)?;
    let dim = keyword_value(dim_line.unwrap(), "dim")?;
    if dim == 0 {
        let t = &dim_line.unwrap()[1];
        return Err(parse_err(t.line, t.column, "dimension must be positive"));
    }
    let mut vertices = Vec::new();
    let mut last_line = 2;
    for tokens in it {
        let head = &tokens[0];
        last_line = head.line;
        if head.text != "vertex" {
            return Err(parse_err(
                head.line,
                head.column,
                format!("expected 'vertex', found '{}'", head.text),
            ));
        }
        vertices.push(float_row(tokens, dim, "vertex")?);
    }
    if vertices.is_empty() {
        return Err(parse_err(last_line + 1, 1, "expected at least one 'vertex' line"));
    }
    Ok(VPolytope::new(vertices).expect("shapes already checked"))
}

pub fn serialize_matrix(m: &Matrix) -> String {
    let mut out = String::from("matrix\n");
    for i in 0..m.rows() {
        out.push_str("row");
        push_floats(&mut out, m.row(i));
        out.push('\n');
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<Matrix, IoError> {
    let lines = tokenize_lines(text);
    let mut it = lines.iter();
    expect_keyword(it.next(), "matrix", 0)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut last_line = 1;
    for tokens in it {
        let head = &tokens[0];
        last_line = head.line;
        if head.text != "row" {
            return Err(parse_err(
                head.line,
                head.column,
                format!("expected 'row', found '{}'", head.text),
            ));
        }
        let row: Vec<f64> = tokens[1..].iter().map(parse_f64).collect::<Result<_, _>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(parse_err(
                    head.line,
                    head.column,
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        if row.is_empty() {
            return Err(parse_err(head.line, head.column, "'row' needs at least one number"));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(last_line + 1, 1, "expected at least one 'row' line"));
    }
    Ok(Matrix::from_rows(rows).expect("shapes already checked"))
}

/// Serializes an expression in the prefix format accepted by [`parse_expr`].
pub fn serialize_expr(e: &Expr) -> String {
    match e {
        Expr::Var(i) => format!("x{}", i + 1),
        Expr::Const(k) => fmt_f64(*k),
        Expr::Neg(a) => format!("(neg {})", serialize_expr(a)),
        Expr::Sum(v) => {
            let args: Vec<String> = v.iter().map(serialize_expr).collect();
            format!("(+ {})", args.join(" "))
        }
        Expr::Sub(a, b) => format!("(- {} {})", serialize_expr(a), serialize_expr(b)),
        Expr::Prod(v) => {
            let args: Vec<String> = v.iter().map(serialize_expr).collect();
            format!("(* {})", args.join(" "))
        }
        Expr::Pow(a, k) => format!("(pow {} {k})", serialize_expr(a)),
        Expr::Div(a, k) => format!("(/ {} {})", serialize_expr(a), fmt_f64(*k)),
        Expr::Sin(a) => format!("(sin {})", serialize_expr(a)),
        Expr::Cos(a) => format!("(cos {})", serialize_expr(a)),
        Expr::Exp(a) => format!("(exp {})", serialize_expr(a)),
    }
}

/// Parses fully parenthesized prefix notation: operators `+ - * / neg pow
/// sin cos exp`, variables `x1..xN`, decimal literals. `+` and `*` take one
/// or more arguments, `-` and `/` exactly two, `pow` an integer literal
/// exponent, and `/` a constant divisor.
pub fn parse_expr(text: &str) -> Result<Expr, IoError> {
    let tokens = tokenize_expr(text);
    let mut pos = 0;
    let expr = parse_expr_at(&tokens, &mut pos, text)?;
    if pos != tokens.len() {
        let t = &tokens[pos];
        return Err(parse_err(t.line, t.column, format!("unexpected trailing '{}'", t.text)));
    }
    Ok(expr)
}

fn tokenize_expr(text: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let mut start = None;
        for (j, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            if ch.is_whitespace() || ch == '(' || ch == ')' {
                if let Some(s) = start.take() {
                    tokens.push(Token { line: i + 1, column: s + 1, text: &content[s..j] });
                }
                if ch == '(' || ch == ')' {
                    tokens.push(Token { line: i + 1, column: j + 1, text: &content[j..j + 1] });
                }
            } else if start.is_none() {
                start = Some(j);
            }
        }
    }
    tokens
}

fn end_of(text: &str) -> (usize, usize) {
    let line = text.lines().count().max(1);
    let column = text.lines().last().map(|l| l.len() + 1).unwrap_or(1);
    (line, column)
}

fn parse_expr_at(tokens: &[Token], pos: &mut usize, text: &str) -> Result<Expr, IoError> {
    let Some(tok) = tokens.get(*pos) else {
        let (line, column) = end_of(text);
        return Err(parse_err(line, column, "expected an expression, found end of input"));
    };
    *pos += 1;
    match tok.text {
        "(" => {
            let Some(op) = tokens.get(*pos) else {
                let (line, column) = end_of(text);
                return Err(parse_err(line, column, "expected an operator, found end of input"));
            };
            *pos += 1;
            let expr = parse_operator(op, tokens, pos, text)?;
            match tokens.get(*pos) {
                Some(t) if t.text == ")" => {
                    *pos += 1;
                    Ok(expr)
                }
                Some(t) => Err(parse_err(t.line, t.column, format!("expected ')', found '{}'", t.text))),
                None => {
                    let (line, column) = end_of(text);
                    Err(parse_err(line, column, "expected ')', found end of input"))
                }
            }
        }
        ")" => Err(parse_err(tok.line, tok.column, "unexpected ')'")),
        _ => parse_atom(tok),
    }
}

fn parse_atom(tok: &Token) -> Result<Expr, IoError> {
    if let Some(rest) = tok.text.strip_prefix('x') {
        if let Ok(n) = rest.parse::<usize>() {
            if n == 0 {
                return Err(parse_err(tok.line, tok.column, "variables are numbered from x1"));
            }
            return Ok(Expr::Var(n - 1));
        }
    }
    tok.text
        .parse::<f64>()
        .map(Expr::Const)
        .map_err(|_| parse_err(tok.line, tok.column, format!("expected a variable or number, found '{}'", tok.text)))
}

fn parse_operator(op: &Token, tokens: &[Token], pos: &mut usize, text: &str) -> Result<Expr, IoError> {
    let at_close = |pos: usize| tokens.get(pos).map(|t| t.text == ")").unwrap_or(true);
    match op.text {
        "+" | "*" => {
            let mut args = Vec::new();
            while !at_close(*pos) {
                args.push(parse_expr_at(tokens, pos, text)?);
            }
            if args.is_empty() {
                return Err(parse_err(op.line, op.column, format!("'{}' needs at least one argument", op.text)));
            }
            Ok(if op.text == "+" { Expr::Sum(args) } else { Expr::Prod(args) })
        }
        "-" => {
            let a = parse_expr_at(tokens, pos, text)?;
            let b = parse_expr_at(tokens, pos, text)?;
            Ok(Expr::Sub(Box::new(a), Box::new(b)))
        }
        "/" => {
            let a = parse_expr_at(tokens, pos, text)?;
            let divisor_tok = tokens.get(*pos).copied();
            let b = parse_expr_at(tokens, pos, text)?;
            match b {
                Expr::Const(k) if k != 0.0 => Ok(Expr::Div(Box::new(a), k)),
                Expr::Const(_) => {
                    let t = divisor_tok.unwrap();
                    Err(parse_err(t.line, t.column, "division by zero"))
                }
                _ => {
                    let (line, column) = divisor_tok
                        .map(|t| (t.line, t.column))
                        .unwrap_or_else(|| end_of(text));
                    Err(parse_err(line, column, "'/' requires a constant divisor"))
                }
            }
        }
        "neg" => Ok(Expr::Neg(Box::new(parse_expr_at(tokens, pos, text)?))),
        "pow" => {
            let base = parse_expr_at(tokens, pos, text)?;
            let Some(exp_tok) = tokens.get(*pos) else {
                let (line, column) = end_of(text);
                return Err(parse_err(line, column, "'pow' needs an integer exponent"));
            };
            *pos += 1;
            let k = exp_tok.text.parse::<u32>().map_err(|_| {
                parse_err(
                    exp_tok.line,
                    exp_tok.column,
                    format!("'pow' needs a nonnegative integer exponent, found '{}'", exp_tok.text),
                )
            })?;
            // x^0 is the constant 1 regardless of the base.
            if k == 0 {
                Ok(Expr::Const(1.0))
            } else {
                Ok(Expr::Pow(Box::new(base), k))
            }
        }
        "sin" => Ok(Expr::Sin(Box::new(parse_expr_at(tokens, pos, text)?))),
        "cos" => Ok(Expr::Cos(Box::new(parse_expr_at(tokens, pos, text)?))),
        "exp" => Ok(Expr::Exp(Box::new(parse_expr_at(tokens, pos, text)?))),
        other => Err(parse_err(op.line, op.column, format!("unknown operator '{other}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{example_1, hexagon, random_zpoly};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const EXAMPLE_1_TEXT: &str = "\
zpoly
dim 2
factors 2
center -0.5 0
gen 1.5 -0.5 : 1
gen -0.5 -2 : 2
gen -0.5 0.5 : 1 2
";

    #[test]
    fn parses_the_reference_block() {
        let p = parse_zpoly(EXAMPLE_1_TEXT).unwrap();
        assert_eq!(p, example_1());
    }

    #[test]
    fn parses_a_bare_point() {
        let p = parse_zpoly("zpoly\ndim 1\nfactors 0\ncenter 3\n").unwrap();
        assert_eq!(p.center(), &[3.0]);
        assert_eq!(p.num_generators(), 0);
    }

    #[test]
    fn comments_and_crlf_are_accepted() {
        let text = EXAMPLE_1_TEXT.replace('\n', "  # side note\r\n");
        assert_eq!(parse_zpoly(&text).unwrap(), example_1());
    }

    #[test]
    fn zpoly_round_trip_is_canonical() {
        let text = serialize_zpoly(&example_1());
        assert_eq!(parse_zpoly(&text).unwrap(), example_1());
        assert_eq!(serialize_zpoly(&parse_zpoly(EXAMPLE_1_TEXT).unwrap()), text);
    }

    #[test]
    fn invalid_inputs_are_rejected_with_positions() {
        let err = parse_zpoly("zpoly\ndim 2\nfactors 2\ncenter 0 oops\n").unwrap_err();
        match err {
            IoError::Parse { line: 4, column, .. } => assert_eq!(column, 10),
            other => panic!("unexpected {other}"),
        }

        let err = parse_zpoly("zpoly\ndim 2\nfactors 2\ncenter 0 0\ngen 1 1 : 2 1\n").unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 5, .. }), "{err}");

        // Index out of range is a validation failure, not a token error.
        let err = parse_zpoly("zpoly\ndim 2\nfactors 1\ncenter 0 0\ngen 1 1 : 2\n").unwrap_err();
        assert!(matches!(err, IoError::Invalid(_)), "{err}");
    }

    #[test]
    fn vpoly_round_trip() {
        let text = serialize_vpoly(&hexagon());
        assert_eq!(parse_vpoly(&text).unwrap(), hexagon());

        let single = parse_vpoly("vpoly\ndim 2\nvertex 1 2\n").unwrap();
        assert_eq!(single.num_vertices(), 1);

        assert!(parse_vpoly("vpoly\ndim 2\n").is_err());
    }

    #[test]
    fn matrix_round_trip() {
        let m = Matrix::from_rows(vec![vec![1.0, 0.5], vec![-2.0, 3.0]]).unwrap();
        let text = serialize_matrix(&m);
        assert_eq!(parse_matrix(&text).unwrap(), m);
        assert!(parse_matrix("matrix\nrow 1 2\nrow 3\n").is_err());
    }

    #[test]
    fn expression_parsing_matches_hand_built_tree() {
        let text = "(+ (neg (pow (- x1 1.5) 2)) (neg (pow (- x2 1) 2)) (* 4 (* (cos x1) (sin x2))))";
        let parsed = parse_expr(text).unwrap();
        let want = Expr::Sum(vec![
            Expr::Neg(Box::new(Expr::Pow(
                Box::new(Expr::Sub(Box::new(Expr::Var(0)), Box::new(Expr::Const(1.5)))),
                2,
            ))),
            Expr::Neg(Box::new(Expr::Pow(
                Box::new(Expr::Sub(Box::new(Expr::Var(1)), Box::new(Expr::Const(1.0)))),
                2,
            ))),
            Expr::Prod(vec![
                Expr::Const(4.0),
                Expr::Prod(vec![
                    Expr::Cos(Box::new(Expr::Var(0))),
                    Expr::Sin(Box::new(Expr::Var(1))),
                ]),
            ]),
        ]);
        assert_eq!(parsed, want);
    }

    #[test]
    fn pow_zero_normalizes_to_one() {
        assert_eq!(parse_expr("(pow x1 0)").unwrap(), Expr::Const(1.0));
    }

    #[test]
    fn expression_errors_carry_positions() {
        let err = parse_expr("(+ x1 (sin x2)").unwrap_err();
        assert!(matches!(err, IoError::Parse { .. }), "{err}");

        let err = parse_expr("(+ x1))").unwrap_err();
        assert!(matches!(err, IoError::Parse { line: 1, column: 7, .. }), "{err}");

        assert!(parse_expr("(/ x1 0)").is_err());
        assert!(parse_expr("(/ x1 x2)").is_err());
        assert!(parse_expr("(log x1)").is_err());
        assert!(parse_expr("x0").is_err());
    }

    #[test]
    fn expr_round_trip() {
        let text = "(+ (neg (pow (- x1 1.5) 2)) (* 4 (cos x1)))";
        let e = parse_expr(text).unwrap();
        assert_eq!(parse_expr(&serialize_expr(&e)).unwrap(), e);
    }

    #[test]
    fn serialized_corpus_round_trips_bitwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        for _ in 0..25 {
            let p = random_zpoly(&mut rng, 3, 4, 6);
            let text = serialize_zpoly(&p);
            let back = parse_zpoly(&text).unwrap();
            assert_eq!(back, p);
            assert_eq!(serialize_zpoly(&back), text);
        }
    }

    proptest! {
        #[test]
        fn zpoly_numeric_round_trip(
            center in prop::collection::vec(-1e12f64..1e12, 2),
            coeffs in prop::collection::vec(-1e12f64..1e12, 3),
        ) {
            let p = ZPolytope::new(
                center,
                2,
                vec![
                    (vec![coeffs[0], coeffs[1]], vec![1]),
                    (vec![coeffs[2], coeffs[0]], vec![1, 2]),
                ],
            )
            .unwrap();
            let back = parse_zpoly(&serialize_zpoly(&p)).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn vpoly_numeric_round_trip(
            values in prop::collection::vec(-1e12f64..1e12, 6),
        ) {
            let p = VPolytope::new(vec![
                vec![values[0], values[1]],
                vec![values[2], values[3]],
                vec![values[4], values[5]],
            ])
            .unwrap();
            let back = parse_vpoly(&serialize_vpoly(&p)).unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
