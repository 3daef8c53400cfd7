//! Canonical text rendering of AST nodes.

use std::fmt::{self, Write as _};

use super::ast::{ActRef, ClosingMode, ClosingStatement, Description, Fragment, FragmentKind};

fn join(args: &[ActRef], sep: &str, each: impl Fn(&ActRef) -> String) -> String {
    args.iter().map(each).collect::<Vec<_>>().join(sep)
}

/// Flow fragments render with a terminal period; subprocess declarations without.
impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FragmentKind::*;
        let a = &self.args;
        let n = a.len();
        match self.kind {
            Sequence => write!(f, "After {} ends, immediately start {}.", a[0], a[1]),
            Eventually => write!(f, "After {} ends, eventually start {}.", a[0], a[1]),
            ParallelSplit | XorSplitInAndSplit => write!(
                f,
                "After {} ends, immediately {}.",
                a[0],
                join(&a[1..], " and ", |x| format!("start {x}"))
            ),
            ExclusiveChoice | AndSplitInXorSplit => write!(
                f,
                "After {} ends, immediately either {}.",
                a[0],
                join(&a[1..], " or ", |x| format!("start {x}"))
            ),
            Synchronization | XorJoinInAndJoin => write!(
                f,
                "After {}, immediately start {}.",
                join(&a[..n - 1], " and ", |x| format!("{x} ends")),
                a[n - 1]
            ),
            SimpleMerge | AndJoinInXorJoin => write!(
                f,
                "After either {}, immediately start {}.",
                join(&a[..n - 1], " or ", |x| format!("{x} ends")),
                a[n - 1]
            ),
            RepeatSince => write!(
                f,
                "After {} ends, immediately repeat since {} or {}.",
                a[0],
                a[1],
                join(&a[2..], " or ", |x| format!("start {x}"))
            ),
            AndSubprocess | OrSubprocess => {
                let id = self
                    .subprocess_id
                    .as_ref()
                    .map(|s| s.as_str())
                    .unwrap_or("?");
                let sep = if self.kind == AndSubprocess {
                    " and "
                } else {
                    " or "
                };
                write!(f, "({id}): {}", join(a, sep, ToString::to_string))
            }
        }
    }
}

impl fmt::Display for ClosingStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ends = |sep| join(&self.args, sep, |x| format!("{x} ends"));
        match self.mode {
            ClosingMode::Single | ClosingMode::Conjunctive => {
                write!(f, "After {}, the process finishes.", ends(" and "))
            }
            ClosingMode::Disjunctive => {
                write!(f, "After either {}, the process finishes.", ends(" or "))
            }
        }
    }
}

/// Renders a description as canonical BeePath text, one statement per line.
pub fn render(d: &Description) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}.", d.leading_text);
    let _ = writeln!(out, "Initially start \"{}\".", d.initial);
    for f in &d.fragments {
        if f.kind.is_declaration() {
            let _ = writeln!(out, "{f}.");
        } else {
            let _ = writeln!(out, "{f}");
        }
    }
    let _ = writeln!(out, "{}", d.closing);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::ast::SubprocessId;

    #[test]
    fn sequence_text() {
        let f = Fragment::new(
            FragmentKind::Sequence,
            vec![ActRef::activity("A"), ActRef::activity("B")],
        );
        assert_eq!(f.to_string(), r#"After "A" ends, immediately start "B"."#);
    }

    #[test]
    fn and_subprocess_text() {
        let f = Fragment::declaration(
            FragmentKind::AndSubprocess,
            SubprocessId::new("s1"),
            vec![ActRef::activity("A"), ActRef::activity("B")],
        );
        assert_eq!(f.to_string(), r#"(s1): "A" and "B""#);
    }
}
