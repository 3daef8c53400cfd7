//! Parses single flow statements and prints their kind, arguments, and rendering.

use beepath::grammar::{parse_statement, Statement};

fn main() {
    let statements = [
        r#"After "A" ends, immediately start "B"."#,
        r#"After "A" ends, immediately start "B" and start "C"."#,
        r#"After "A" ends, immediately either start "B" or start "C"."#,
        r#"After either "A" ends or "B" ends, immediately start "C"."#,
        r#"After "A" ends, immediately repeat since "B" or start "C"."#,
        r#"(A_and_B): "A" and "B""#,
        r#"After "A" ends, start "B"."#,
    ];
    for text in statements {
        match parse_statement(text) {
            Ok(Statement::Fragment(f)) => {
                println!("{:?} {:?}", f.kind, f.args);
                println!("  {f}");
            }
            Ok(other) => println!("{other:?}"),
            Err(e) => println!("{e}"),
        }
    }
}
