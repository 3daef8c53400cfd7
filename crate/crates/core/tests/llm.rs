mod common;

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::thread;
use std::time::Duration;

use beepath::llm::{structure, EndpointConfig, HttpTransport, LlmError, TransportError};
use common::{Scripted, HOSPITAL};

const FREE_TEXT: &str =
    "The process starts when a female patient is examined by an outpatient physician.";

fn config(max_retries: u32) -> EndpointConfig {
    let mut cfg = EndpointConfig::new("http://unused.invalid", "stub-model", "UNUSED_KEY_VAR");
    cfg.max_retries = max_retries;
    cfg
}

const BROKEN: &str = "After \"A\" ends, start B";

#[test]
fn valid_first_answer_is_returned() {
    let fenced = format!("```beepath\n{HOSPITAL}```\n");
    let t = Scripted::texts(&[&fenced]);
    let s = structure(FREE_TEXT, &config(3), &t).unwrap();
    assert_eq!(s.retry_count, 0);
    assert_eq!(s.description.fragments.len(), 14);
    assert_eq!(s.text, HOSPITAL.trim());
    let seen = t.seen.borrow();
    assert_eq!(seen.len(), 1);
    assert_eq!(seen[0].model, "stub-model");
    let roles: Vec<&str> = seen[0].messages.iter().map(|m| m.role.as_str()).collect();
    assert_eq!(roles, ["system", "user"]);
    assert!(seen[0].messages[1].content.contains(FREE_TEXT));
}

#[test]
fn invalid_then_valid_counts_one_retry() {
    let t = Scripted::texts(&[BROKEN, HOSPITAL]);
    let s = structure(FREE_TEXT, &config(3), &t).unwrap();
    assert_eq!(s.retry_count, 1);
    let seen = t.seen.borrow();
    assert_eq!(seen.len(), 2);
    let second = &seen[1].messages;
    assert_eq!(second.len(), 4);
    assert_eq!(second[2].role, "assistant");
    assert_eq!(second[2].content, BROKEN);
    assert_eq!(second[3].role, "user");
    assert!(
        second[3].content.contains("unexpected word 'B' at 1:23"),
        "{}",
        second[3].content
    );
}

#[test]
fn exhaustion_surfaces_the_last_diagnostics() {
    let t = Scripted::texts(&[BROKEN, BROKEN, BROKEN]);
    match structure(FREE_TEXT, &config(2), &t) {
        Err(LlmError::Exhausted {
            attempts,
            last_text,
            diagnostics,
        }) => {
            assert_eq!(attempts, 3);
            assert_eq!(last_text, BROKEN);
            assert!(!diagnostics.is_empty());
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(t.seen.borrow().len(), 3);
}

#[test]
fn semantic_errors_also_trigger_a_retry() {
    let undeclared = HOSPITAL.replace(
        "(s1): \"order examination with follow up treatment\" and \"fill out request form\".\n",
        "",
    );
    let t = Scripted::texts(&[&undeclared, HOSPITAL]);
    let s = structure(FREE_TEXT, &config(1), &t).unwrap();
    assert_eq!(s.retry_count, 1);
}

#[test]
fn transport_failures_are_not_retried() {
    let t = Scripted::new(vec![Err(TransportError::Status(500))]);
    assert!(matches!(
        structure(FREE_TEXT, &config(3), &t),
        Err(LlmError::Transport(TransportError::Status(500)))
    ));
    assert!(matches!(
        structure("   ", &config(3), &Scripted::texts(&[])),
        Err(LlmError::EmptyInput)
    ));
}

/// Serves one HTTP exchange and hands back the raw request head and body.
fn serve_once(status: &str, body: String) -> (String, thread::JoinHandle<(String, String)>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}", listener.local_addr().unwrap());
    let status = status.to_string();
    let handle = thread::spawn(move || {
        let (stream, _) = listener.accept().unwrap();
        let mut reader = BufReader::new(stream.try_clone().unwrap());
        let mut head = String::new();
        let mut length = 0;
        loop {
            let mut line = String::new();
            reader.read_line(&mut line).unwrap();
            if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                length = v.trim().parse().unwrap();
            }
            if line == "\r\n" {
                break;
            }
            head.push_str(&line);
        }
        let mut req_body = vec![0; length];
        reader.read_exact(&mut req_body).unwrap();
        let mut stream = stream;
        write!(
            stream,
            "HTTP/1.1 {status}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
            body.len()
        )
        .unwrap();
        (head, String::from_utf8(req_body).unwrap())
    });
    (url, handle)
}

#[test]
fn http_transport_speaks_chat_completions() {
    let reply = serde_json::json!({
        "choices": [{"message": {"role": "assistant", "content": HOSPITAL}}]
    })
    .to_string();
    let (url, server) = serve_once("200 OK", reply);
    let t = HttpTransport::new(&url, "sk-test-123".into(), Duration::from_secs(10));
    let s = structure(FREE_TEXT, &config(0), &t).unwrap();
    assert_eq!(s.description.fragments.len(), 14);
    let (head, body) = server.join().unwrap();
    assert!(head.starts_with("POST /chat/completions "), "{head}");
    assert!(head.contains("Bearer sk-test-123"));
    let json: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(json["model"], "stub-model");
    assert_eq!(json["messages"].as_array().unwrap().len(), 2);
    assert!(!format!("{t:?}").contains("sk-test-123"));
}

#[test]
fn http_transport_maps_rejected_credentials() {
    let (url, server) = serve_once("401 Unauthorized", "{}".into());
    let t = HttpTransport::new(&url, "bad".into(), Duration::from_secs(10));
    assert!(matches!(
        structure(FREE_TEXT, &config(3), &t),
        Err(LlmError::Transport(TransportError::Auth(401)))
    ));
    server.join().unwrap();
}

#[test]
fn malformed_reply_is_reported() {
    let (url, server) = serve_once("200 OK", "{\"choices\": []}".into());
    let t = HttpTransport::new(&url, "k".into(), Duration::from_secs(10));
    assert!(matches!(
        structure(FREE_TEXT, &config(0), &t),
        Err(LlmError::Transport(TransportError::Malformed(_)))
    ));
    server.join().unwrap();
}
