//! One-shot operator algebra on stdin: an optional `vars` line followed by
//! one operator expression per line.

use super::parser::{format_operator_exact, parse_operator, parse_vars};
use super::run::symbolic_symbol;
use crate::cdiff::CDiffOperator;
use crate::diffpoly::Names;
use crate::error::{Error, Result};

pub struct AdHoc {
    pub names: Names,
    pub operators: Vec<CDiffOperator>,
}

fn relocate(err: Error, line: usize) -> Error {
    match err {
        Error::Parse {
            column, message, ..
        } => Error::Parse {
            line,
            column,
            message,
        },
        other => other,
    }
}

pub fn parse_adhoc(text: &str) -> Result<AdHoc> {
    let mut names = None;
    let mut operators = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with("vars") && names.is_none() && operators.is_empty() {
            names = Some(parse_vars(line).map_err(|e| relocate(e, idx + 1))?);
            continue;
        }
        let n = names.get_or_insert_with(Names::default);
        operators.push(parse_operator(line, n).map_err(|e| relocate(e, idx + 1))?);
    }
    Ok(AdHoc {
        names: names.unwrap_or_default(),
        operators,
    })
}

pub fn adjoint(text: &str) -> Result<String> {
    let input = parse_adhoc(text)?;
    Ok(input
        .operators
        .iter()
        .map(|op| format_operator_exact(&op.adjoint(), &input.names) + "\n")
        .collect())
}

/// `A_1 ∘ A_2 ∘ … ∘ A_r` over the operator lines.
pub fn compose(text: &str) -> Result<String> {
    let input = parse_adhoc(text)?;
    let mut ops = input.operators.iter();
    let Some(first) = ops.next() else {
        return Err(Error::Validation(
            "compose needs at least two operators".into(),
        ));
    };
    if input.operators.len() < 2 {
        return Err(Error::Validation(
            "compose needs at least two operators".into(),
        ));
    }
    let mut acc = first.clone();
    for op in ops {
        acc = acc.compose(op)?;
    }
    Ok(format_operator_exact(&acc, &input.names) + "\n")
}

pub fn symbol(text: &str) -> Result<String> {
    let input = parse_adhoc(text)?;
    Ok(input
        .operators
        .iter()
        .map(|op| {
            let (_, m) = symbolic_symbol(op, &input.names);
            let text = if m.len() == 1 && m[0].len() == 1 {
                m[0][0].clone()
            } else {
                let rows: Vec<String> = m.iter().map(|r| format!("[{}]", r.join(", "))).collect();
                format!("[{}]", rows.join(", "))
            };
            text + "\n"
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjoint_and_compose() {
        assert_eq!(adjoint("u*D_x\n").unwrap(), "-u*D_x - u_x\n");
        assert_eq!(compose("D_x\nu\n").unwrap(), "u*D_x + u_x\n");
        assert_eq!(
            symbol("vars x[2], u[1]\nD_x1x2 + u*D_x1\n").unwrap(),
            "θ1*θ2\n"
        );
        assert!(compose("D_x\n").is_err());
    }

    #[test]
    fn errors_report_input_line() {
        match adjoint("# header\n\nD_x*u\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
