//! OpenQASM 2.0 for the `h`, `ry`, `u3`, `cx` and `measure` subset.

use std::fmt::{self, Write as _};

use qsynth_core::{Gate, QuantumCircuit, SynthError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum QasmError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unsupported OpenQASM feature `{feature}`")]
    UnsupportedQasmFeature { line: usize, feature: String },
    #[error("line {line}: index {index} out of range for register of size {size}")]
    IndexError { line: usize, index: usize, size: usize },
    #[error("line {line}: {source}")]
    InvalidGate { line: usize, source: SynthError },
    #[error("{0}")]
    Circuit(SynthError),
}

/// Emitted OpenQASM source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QasmDocument {
    text: String,
}

impl QasmDocument {
    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

impl fmt::Display for QasmDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// 17 significant digits, so every angle reads back to the same `f64`.
fn angle(v: f64) -> String {
    format!("{v:.16e}")
}

/// Render a lowered circuit. With `include_measure` every qubit `i` is
/// measured into `c[i]`.
pub fn emit_qasm(circuit: &QuantumCircuit, include_measure: bool) -> Result<QasmDocument, QasmError> {
    let gates = circuit.gates().map_err(QasmError::Circuit)?;
    let n = circuit.n_qubits();
    let mut text = format!("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[{n}];\ncreg c[{n}];\n");
    for gate in &gates {
        match *gate {
            Gate::H { qubit } => writeln!(text, "h q[{qubit}];"),
            Gate::Ry { qubit, theta } => writeln!(text, "ry({}) q[{qubit}];", angle(theta)),
            Gate::U3 { qubit, theta, phi, lambda } => {
                writeln!(text, "u3({},{},{}) q[{qubit}];", angle(theta), angle(phi), angle(lambda))
            }
            Gate::Cx { control, target } => writeln!(text, "cx q[{control}],q[{target}];"),
        }
        .unwrap();
    }
    if include_measure {
        for q in 0..n {
            writeln!(text, "measure q[{q}] -> c[{q}];").unwrap();
        }
    }
    Ok(QasmDocument { text })
}

/// Statements split on `;` with `//` comments removed, tagged with the line
/// their first character is on.
fn statements(source: &str) -> Result<Vec<(usize, String)>, QasmError> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut start = 0;
    for (i, raw) in source.lines().enumerate() {
        let line = raw.split("//").next().unwrap_or("");
        for ch in line.chars() {
            if ch == ';' {
                out.push((start, current.trim().to_string()));
                current.clear();
            } else {
                if current.trim().is_empty() && !ch.is_whitespace() {
                    start = i + 1;
                }
                current.push(ch);
            }
        }
        current.push(' ');
    }
    if !current.trim().is_empty() {
        return Err(QasmError::Syntax { line: start, message: "missing `;`".into() });
    }
    Ok(out.into_iter().filter(|(_, s)| !s.is_empty()).collect())
}

/// Arithmetic over numbers and `pi` with `+ - * /` and parentheses.
struct Expr<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
}

impl<'a> Expr<'a> {
    fn eval(src: &'a str) -> Option<f64> {
        let mut p = Expr { chars: src.char_indices().peekable(), src };
        let v = p.sum()?;
        p.skip_ws();
        p.chars.peek().is_none().then_some(v)
    }

    fn skip_ws(&mut self) {
        while self.chars.next_if(|(_, c)| c.is_whitespace()).is_some() {}
    }

    fn sum(&mut self) -> Option<f64> {
        let mut v = self.product()?;
        loop {
            self.skip_ws();
            match self.chars.peek().map(|p| p.1) {
                Some('+') => { self.chars.next(); v += self.product()?; }
                Some('-') => { self.chars.next(); v -= self.product()?; }
                _ => return Some(v),
            }
        }
    }

    fn product(&mut self) -> Option<f64> {
        let mut v = self.unary()?;
        loop {
            self.skip_ws();
            match self.chars.peek().map(|p| p.1) {
                Some('*') => { self.chars.next(); v *= self.unary()?; }
                Some('/') => { self.chars.next(); v /= self.unary()?; }
                _ => return Some(v),
            }
        }
    }

    fn unary(&mut self) -> Option<f64> {
        self.skip_ws();
        match self.chars.peek().map(|p| p.1)? {
            '-' => { self.chars.next(); Some(-self.unary()?) }
            '+' => { self.chars.next(); self.unary() }
            '(' => {
                self.chars.next();
                let v = self.sum()?;
                self.skip_ws();
                self.chars.next_if(|(_, c)| *c == ')')?;
                Some(v)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Option<f64> {
        let (start, _) = *self.chars.peek()?;
        let mut end = start;
        let mut prev = ' ';
        while let Some(&(i, c)) = self.chars.peek() {
            let exponent_sign = (c == '+' || c == '-') && (prev == 'e' || prev == 'E') && end > start
                && self.src[start..i].chars().next().is_some_and(|f| f.is_ascii_digit() || f == '.');
            if c.is_ascii_alphanumeric() || c == '.' || c == '_' || exponent_sign {
                prev = c;
                end = i + c.len_utf8();
                self.chars.next();
            } else {
                break;
            }
        }
        match &self.src[start..end] {
            "pi" => Some(std::f64::consts::PI),
            token => token.parse().ok(),
        }
    }
}

struct Registers {
    qreg: Option<(String, usize)>,
    creg: Option<(String, usize)>,
}

fn unsupported(line: usize, feature: impl Into<String>) -> QasmError {
    QasmError::UnsupportedQasmFeature { line, feature: feature.into() }
}

fn syntax(line: usize, message: impl Into<String>) -> QasmError {
    QasmError::Syntax { line, message: message.into() }
}

/// `name[index]` checked against a declared register.
fn operand(text: &str, register: &Option<(String, usize)>, line: usize) -> Result<u32, QasmError> {
    let text = text.trim();
    let (name, size) = register.as_ref().ok_or_else(|| syntax(line, "register used before declaration"))?;
    let Some((reg, rest)) = text.split_once('[') else {
        return Err(if text == name { unsupported(line, "register broadcast") } else { syntax(line, format!("bad operand `{text}`")) });
    };
    if reg.trim() != name {
        return Err(syntax(line, format!("unknown register `{}`", reg.trim())));
    }
    let index: usize = rest
        .strip_suffix(']')
        .and_then(|i| i.trim().parse().ok())
        .ok_or_else(|| syntax(line, format!("bad operand `{text}`")))?;
    if index >= *size {
        return Err(QasmError::IndexError { line, index, size: *size });
    }
    Ok(index as u32)
}

fn declaration(rest: &str, line: usize) -> Result<(String, usize), QasmError> {
    let (name, size) = rest.split_once('[').ok_or_else(|| syntax(line, "expected `name[size]`"))?;
    let size: usize = size
        .trim()
        .strip_suffix(']')
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| syntax(line, "expected `name[size]`"))?;
    Ok((name.trim().to_string(), size))
}

/// Parse OpenQASM 2.0 using one quantum register and the `h`, `ry`, `u3` and
/// `cx` gates from `qelib1.inc`. The circuit is marked measured when every
/// qubit is measured into the matching classical bit.
pub fn parse_qasm(source: &str) -> Result<QuantumCircuit, QasmError> {
    let stmts = statements(source)?;
    let mut iter = stmts.into_iter();
    match iter.next() {
        Some((line, s)) => match s.strip_prefix("OPENQASM") {
            Some(v) if v.trim() == "2.0" => {}
            Some(v) => return Err(unsupported(line, format!("OPENQASM {}", v.trim()))),
            None => return Err(syntax(line, "expected `OPENQASM 2.0;` header")),
        },
        None => return Err(syntax(1, "empty program")),
    }
    let mut regs = Registers { qreg: None, creg: None };
    let mut gates: Vec<(usize, Gate)> = Vec::new();
    let mut measured: Vec<bool> = Vec::new();
    for (line, stmt) in iter {
        let keyword_end = stmt.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(stmt.len());
        let (keyword, rest) = stmt.split_at(keyword_end);
        match keyword {
            "include" => {
                if rest.trim() != "\"qelib1.inc\"" {
                    return Err(unsupported(line, format!("include {}", rest.trim())));
                }
            }
            "qreg" | "creg" => {
                let decl = declaration(rest, line)?;
                let slot = if keyword == "qreg" { &mut regs.qreg } else { &mut regs.creg };
                if slot.is_some() {
                    return Err(unsupported(line, format!("multiple {keyword} declarations")));
                }
                if keyword == "qreg" {
                    measured = vec![false; decl.1];
                }
                *slot = Some(decl);
            }
            "measure" => {
                let (q, c) = rest.split_once("->").ok_or_else(|| syntax(line, "expected `measure q[i] -> c[i]`"))?;
                let q = operand(q, &regs.qreg, line)?;
                let c = operand(c, &regs.creg, line)?;
                if q != c {
                    return Err(unsupported(line, "measurement into a different bit index"));
                }
                measured[q as usize] = true;
            }
            "h" | "ry" | "u3" | "cx" => {
                let rest = rest.trim_start();
                let (params, operands) = match rest.strip_prefix('(') {
                    Some(r) => {
                        let close = r.rfind(')').ok_or_else(|| syntax(line, "unclosed `(`"))?;
                        let params = r[..close]
                            .split(',')
                            .map(|p| Expr::eval(p).ok_or_else(|| syntax(line, format!("bad parameter `{}`", p.trim()))))
                            .collect::<Result<Vec<f64>, _>>()?;
                        (params, &r[close + 1..])
                    }
                    None => (Vec::new(), rest),
                };
                let qubits = operands
                    .split(',')
                    .map(|o| operand(o, &regs.qreg, line))
                    .collect::<Result<Vec<u32>, _>>()?;
                let gate = match (keyword, params.as_slice(), qubits.as_slice()) {
                    ("h", [], &[qubit]) => Gate::H { qubit },
                    ("ry", &[theta], &[qubit]) => Gate::Ry { qubit, theta },
                    ("u3", &[theta, phi, lambda], &[qubit]) => Gate::U3 { qubit, theta, phi, lambda },
                    ("cx", [], &[control, target]) => Gate::Cx { control, target },
                    _ => return Err(syntax(line, format!("wrong arguments for `{keyword}`"))),
                };
                gates.push((line, gate));
            }
            other => return Err(unsupported(line, other)),
        }
    }
    let (_, n) = regs.qreg.ok_or_else(|| syntax(1, "no qreg declared"))?;
    let mut circuit = QuantumCircuit::new(n as u32).map_err(QasmError::Circuit)?;
    for (line, gate) in gates {
        circuit.push(gate).map_err(|source| QasmError::InvalidGate { line, source })?;
    }
    circuit.measured = !measured.is_empty() && measured.iter().all(|&m| m);
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_qubit() -> QuantumCircuit {
        QuantumCircuit::from_gates(1, [Gate::Ry { qubit: 0, theta: std::f64::consts::FRAC_PI_2 }]).unwrap()
    }

    #[test]
    fn emits_header_and_gates() {
        let doc = emit_qasm(&one_qubit(), true).unwrap();
        assert_eq!(
            doc.as_str(),
            "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\ncreg c[1];\nry(1.5707963267948966e0) q[0];\nmeasure q[0] -> c[0];\n"
        );
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let c = QuantumCircuit::from_gates(
            3,
            [
                Gate::H { qubit: 2 },
                Gate::Cx { control: 2, target: 0 },
                Gate::Ry { qubit: 1, theta: -0.1 },
                Gate::U3 { qubit: 0, theta: 1e-300, phi: 0.0, lambda: std::f64::consts::PI },
            ],
        )
        .unwrap();
        for measure in [false, true] {
            let text = emit_qasm(&c, measure).unwrap().into_string();
            let parsed = parse_qasm(&text).unwrap();
            assert_eq!(parsed.measured, measure);
            assert_eq!(parsed.gates().unwrap(), c.gates().unwrap());
            assert_eq!(emit_qasm(&parsed, measure).unwrap().as_str(), text);
        }
    }

    #[test]
    fn multiplexors_must_be_lowered() {
        let mut c = QuantumCircuit::new(2).unwrap();
        c.push_multiplexor(qsynth_core::Multiplexor::new(0, vec![1], vec![0.1, 0.2]).unwrap()).unwrap();
        assert_eq!(emit_qasm(&c, false), Err(QasmError::Circuit(SynthError::LoweringRequired)));
    }

    #[test]
    fn pi_expressions_and_comments() {
        let c = parse_qasm("OPENQASM 2.0;\n// prep\ninclude \"qelib1.inc\";\nqreg r[2];\nry(-pi/2) r[1]; // half\nu3(2*pi/4, 0, pi) r[0];\ncx r[0], r[1];\n").unwrap();
        let gates = c.gates().unwrap();
        assert_eq!(gates[0], Gate::Ry { qubit: 1, theta: -std::f64::consts::FRAC_PI_2 });
        assert_eq!(gates[1], Gate::U3 { qubit: 0, theta: std::f64::consts::FRAC_PI_2, phi: 0.0, lambda: std::f64::consts::PI });
        assert!(!c.measured);
        assert_eq!(Expr::eval("1.5e-3"), Some(1.5e-3));
        assert_eq!(Expr::eval("-(1+2)*3"), Some(-9.0));
        assert_eq!(Expr::eval("2 pi"), None);
    }

    #[test]
    fn unsupported_features_report_line() {
        let err = parse_qasm("OPENQASM 2.0;\nqreg q[1];\nrz(0.5) q[0];\n").unwrap_err();
        assert_eq!(err, QasmError::UnsupportedQasmFeature { line: 3, feature: "rz".into() });
        assert!(matches!(parse_qasm("OPENQASM 3.0;\n"), Err(QasmError::UnsupportedQasmFeature { line: 1, .. })));
        assert!(matches!(
            parse_qasm("OPENQASM 2.0;\nqreg q[2];\nbarrier q;\n"),
            Err(QasmError::UnsupportedQasmFeature { line: 3, .. })
        ));
        assert!(matches!(
            parse_qasm("OPENQASM 2.0;\nqreg q[2];\nh q;\n"),
            Err(QasmError::UnsupportedQasmFeature { line: 3, .. })
        ));
    }

    #[test]
    fn index_errors() {
        assert_eq!(
            parse_qasm("OPENQASM 2.0;\nqreg q[2];\n\nh q[2];\n"),
            Err(QasmError::IndexError { line: 4, index: 2, size: 2 })
        );
        assert!(matches!(
            parse_qasm("OPENQASM 2.0;\nqreg q[2];\ncx q[1],q[1];\n"),
            Err(QasmError::InvalidGate { line: 3, .. })
        ));
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_qasm("qreg q[1];"), Err(QasmError::Syntax { line: 1, .. })));
        assert!(matches!(parse_qasm("OPENQASM 2.0;\nqreg q[1];\nh q[0]"), Err(QasmError::Syntax { line: 3, .. })));
        assert!(matches!(parse_qasm("OPENQASM 2.0;\nqreg q[1];\nry() q[0];"), Err(QasmError::Syntax { line: 3, .. })));
        assert!(matches!(parse_qasm("OPENQASM 2.0;\nh q[0];"), Err(QasmError::Syntax { line: 2, .. })));
    }
}
