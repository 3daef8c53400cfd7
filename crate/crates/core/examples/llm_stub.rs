//! Drives the structuring loop with a canned transport instead of a server.

use std::cell::RefCell;
use std::collections::VecDeque;

use beepath::grammar::LEADING_TEXT;
use beepath::llm::{structure, ChatRequest, EndpointConfig, Transport, TransportError};

struct Canned(RefCell<VecDeque<String>>);

impl Transport for Canned {
    fn complete(&self, request: &ChatRequest) -> Result<String, TransportError> {
        println!("request with {} messages", request.messages.len());
        self.0
            .borrow_mut()
            .pop_front()
            .ok_or_else(|| TransportError::Network("no more replies".into()))
    }
}

fn main() {
    let good = format!(
        "```\n{LEADING_TEXT}\nInitially start \"receive order\".\nAfter \"receive order\" ends, immediately start \"ship order\".\nAfter \"ship order\" ends, the process finishes.\n```"
    );
    let replies = VecDeque::from(["Sure! Here is the process.".to_string(), good]);
    let transport = Canned(RefCell::new(replies));
    let cfg = EndpointConfig::new("http://localhost", "any-model", "UNUSED_KEY_VAR");
    match structure("A clerk receives an order and ships it.", &cfg, &transport) {
        Ok(s) => {
            println!("accepted after {} retries:", s.retry_count);
            print!("{}", s.text);
        }
        Err(e) => println!("failed: {e}"),
    }
}
