use crate::declare::{display_label, ConstraintInstance, DeclareSpec};

pub fn decl_line(c: &ConstraintInstance) -> String {
    let params: Vec<&str> = c.params.iter().map(|p| display_label(p)).collect();
    let tail = if params.len() == 1 { "| |" } else { "| | |" };
    format!("{}[{}] {tail}", c.template.decl_name(), params.join(", "))
}

/// Activity headers in alphabet order, then constraint lines sorted.
pub fn emit_decl(spec: &DeclareSpec) -> String {
    let mut out = String::new();
    for a in &spec.alphabet {
        out.push_str("activity ");
        out.push_str(display_label(a));
        out.push('\n');
    }
    let mut lines: Vec<String> = spec.constraints.iter().map(decl_line).collect();
    lines.sort();
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out
}
