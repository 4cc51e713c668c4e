//! Structured check reports with a stable line grammar:
//!
//!   CHECK <name> PASS
//!   CHECK <name> FAIL witness=<token>
//!   NOTE <key>=<value>
//!   RESULT <name>=<value>
//!
//! Failure lines always carry a machine-parsable witness token (no
//! whitespace), so CI can diff reports byte-for-byte.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Line {
    Check {
        name: String,
        pass: bool,
        witness: Option<String>,
    },
    Note {
        key: String,
        value: String,
    },
    Output {
        name: String,
        value: String,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub lines: Vec<Line>,
}

fn tokenize(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join("_")
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn check(&mut self, name: &str, pass: bool, witness: Option<String>) {
        debug_assert!(pass || witness.is_some(), "failure lines need a witness");
        self.lines.push(Line::Check {
            name: name.to_string(),
            pass,
            witness: witness.map(|w| tokenize(&w)),
        });
    }

    pub fn note(&mut self, key: &str, value: impl fmt::Display) {
        self.lines.push(Line::Note {
            key: key.to_string(),
            value: tokenize(&value.to_string()),
        });
    }

    pub fn result(&mut self, name: &str, value: impl fmt::Display) {
        self.lines.push(Line::Output {
            name: name.to_string(),
            value: tokenize(&value.to_string()),
        });
    }

    pub fn merge(&mut self, other: Report) {
        self.lines.extend(other.lines);
    }

    /// True when no CHECK line failed.
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| match l {
            Line::Check { pass, .. } => *pass,
            _ => true,
        })
    }

    pub fn pass_of(&self, name: &str) -> Option<bool> {
        self.lines.iter().find_map(|l| match l {
            Line::Check { name: n, pass, .. } if n == name => Some(*pass),
            _ => None,
        })
    }

    pub fn witness_of(&self, name: &str) -> Option<&str> {
        self.lines.iter().find_map(|l| match l {
            Line::Check {
                name: n, witness, ..
            } if n == name => witness.as_deref(),
            _ => None,
        })
    }

    pub fn note_of(&self, key: &str) -> Option<&str> {
        self.lines.iter().find_map(|l| match l {
            Line::Note { key: k, value } if k == key => Some(value.as_str()),
            _ => None,
        })
    }

    pub fn result_of(&self, name: &str) -> Option<&str> {
        self.lines.iter().find_map(|l| match l {
            Line::Output { name: n, value } if n == name => Some(value.as_str()),
            _ => None,
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            match line {
                Line::Check {
                    name,
                    pass,
                    witness,
                } => {
                    if *pass {
                        writeln!(f, "CHECK {name} PASS")?;
                    } else {
                        writeln!(
                            f,
                            "CHECK {name} FAIL witness={}",
                            witness.as_deref().unwrap_or("unavailable")
                        )?;
                    }
                }
                Line::Note { key, value } => writeln!(f, "NOTE {key}={value}")?,
                Line::Output { name, value } => writeln!(f, "RESULT {name}={value}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_is_stable() {
        let mut r = Report::new();
        r.note("mode", "exhaustive");
        r.check("closure", true, None);
        r.check("orthomodular", false, Some("{(1,1,1)}".to_string()));
        r.result("elements", 6);
        assert_eq!(
            r.to_string(),
            "NOTE mode=exhaustive\nCHECK closure PASS\nCHECK orthomodular FAIL witness={(1,1,1)}\nRESULT elements=6\n"
        );
        assert!(!r.passed());
        assert_eq!(r.pass_of("closure"), Some(true));
        assert_eq!(r.witness_of("orthomodular"), Some("{(1,1,1)}"));
        assert_eq!(r.result_of("elements"), Some("6"));
    }
}
