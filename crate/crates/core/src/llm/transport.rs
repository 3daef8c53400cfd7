use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

impl ChatMessage {
    pub fn new(role: &str, content: impl Into<String>) -> Self {
        Self {
            role: role.to_string(),
            content: content.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChatRequest {
    pub model: String,
    pub messages: Vec<ChatMessage>,
}

#[derive(Debug, Deserialize)]
struct ChatResponse {
    choices: Vec<Choice>,
}

#[derive(Debug, Deserialize)]
struct Choice {
    message: ChatMessage,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransportError {
    #[error("endpoint rejected the credential (HTTP {0})")]
    Auth(u16),
    #[error("endpoint answered HTTP {0}")]
    Status(u16),
    #[error("malformed response: {0}")]
    Malformed(String),
    #[error("{0}")]
    Network(String),
}

/// One chat-completion exchange.
pub trait Transport {
    fn complete(&self, request: &ChatRequest) -> Result<String, TransportError>;
}

/// `POST {base}/chat/completions` with a bearer credential.
pub struct HttpTransport {
    url: String,
    key: String,
    agent: ureq::Agent,
}

impl fmt::Debug for HttpTransport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HttpTransport")
            .field("url", &self.url)
            .finish_non_exhaustive()
    }
}

impl HttpTransport {
    pub fn new(base_url: &str, key: String, timeout: Duration) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .http_status_as_error(false)
            .build()
            .into();
        Self {
            url: format!("{}/chat/completions", base_url.trim_end_matches('/')),
            key,
            agent,
        }
    }
}

impl Transport for HttpTransport {
    fn complete(&self, request: &ChatRequest) -> Result<String, TransportError> {
        let mut resp = self
            .agent
            .post(&self.url)
            .header("Authorization", &format!("Bearer {}", self.key))
            .send_json(request)
            .map_err(|e| TransportError::Network(e.to_string()))?;
        match resp.status().as_u16() {
            401 | 403 => return Err(TransportError::Auth(resp.status().as_u16())),
            s if !(200..300).contains(&s) => return Err(TransportError::Status(s)),
            _ => {}
        }
        let body: ChatResponse = resp
            .body_mut()
            .read_json()
            .map_err(|e| TransportError::Malformed(e.to_string()))?;
        body.choices
            .into_iter()
            .next()
            .map(|c| c.message.content)
            .ok_or_else(|| TransportError::Malformed("no choices".into()))
    }
}
