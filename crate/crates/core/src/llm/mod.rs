//! Turning free text into BeePath with a chat-completion model, validated
//! by the parser before anything is returned.

mod prompt;
mod transport;

use std::time::Duration;

pub use prompt::{build_prompt, grammar_text, PromptDocument, CONVERSION_RULES, OVERVIEW};
pub use transport::{ChatMessage, ChatRequest, HttpTransport, Transport, TransportError};

use crate::diagnostic::Diagnostics;
use crate::grammar::{parse_source, Description};
use crate::model::analyze;

pub const DEFAULT_MAX_RETRIES: u32 = 3;
pub const DEFAULT_TIMEOUT_SECS: u64 = 60;

/// Where to send requests. The credential is referenced by environment
/// variable name and read only when a transport is built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndpointConfig {
    pub base_url: String,
    pub model: String,
    pub key_env: String,
    pub timeout_secs: u64,
    pub max_retries: u32,
}

impl EndpointConfig {
    pub fn new(
        base_url: impl Into<String>,
        model: impl Into<String>,
        key_env: impl Into<String>,
    ) -> Self {
        Self {
            base_url: base_url.into(),
            model: model.into(),
            key_env: key_env.into(),
            timeout_secs: DEFAULT_TIMEOUT_SECS,
            max_retries: DEFAULT_MAX_RETRIES,
        }
    }

    pub fn http_transport(&self) -> Result<HttpTransport, LlmError> {
        let key = std::env::var(&self.key_env)
            .ok()
            .filter(|k| !k.is_empty())
            .ok_or_else(|| LlmError::MissingCredential(self.key_env.clone()))?;
        Ok(HttpTransport::new(
            &self.base_url,
            key,
            Duration::from_secs(self.timeout_secs),
        ))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LlmError {
    #[error("the process description is empty")]
    EmptyInput,
    #[error("environment variable {0} is not set")]
    MissingCredential(String),
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error("no valid BeePath after {attempts} attempt(s):\n{diagnostics}")]
    Exhausted {
        attempts: u32,
        last_text: String,
        diagnostics: Diagnostics,
    },
}

#[derive(Debug, Clone)]
pub struct Structured {
    pub text: String,
    pub description: Description,
    pub retry_count: u32,
}

/// Removes a surrounding Markdown code fence, if any.
pub fn strip_fences(reply: &str) -> String {
    let t = reply.trim();
    if let Some(rest) = t.strip_prefix("```") {
        let body = rest.split_once('\n').map_or("", |(_, b)| b);
        let body = body.trim_end();
        let body = body.strip_suffix("```").unwrap_or(body);
        return body.trim().to_string();
    }
    t.to_string()
}

fn validate(text: &str) -> Result<Description, Diagnostics> {
    let d = parse_source(text)?;
    analyze(&d)?;
    Ok(d)
}

/// Asks the model, re-asking with the diagnostics while the answer does not
/// parse, at most `cfg.max_retries` extra times.
pub fn structure(
    free_text: &str,
    cfg: &EndpointConfig,
    transport: &dyn Transport,
) -> Result<Structured, LlmError> {
    let prompt = build_prompt(free_text)?;
    let mut messages = vec![
        ChatMessage::new("system", prompt.system_message()),
        ChatMessage::new("user", prompt.user_message()),
    ];
    let mut retry_count = 0;
    loop {
        let request = ChatRequest {
            model: cfg.model.clone(),
            messages: messages.clone(),
        };
        let text = strip_fences(&transport.complete(&request)?);
        match validate(&text) {
            Ok(description) => {
                return Ok(Structured {
                    text,
                    description,
                    retry_count,
                });
            }
            Err(diagnostics) if retry_count >= cfg.max_retries => {
                return Err(LlmError::Exhausted {
                    attempts: retry_count + 1,
                    last_text: text,
                    diagnostics,
                });
            }
            Err(diagnostics) => {
                retry_count += 1;
                messages.push(ChatMessage::new("assistant", text));
                messages.push(ChatMessage::new(
                    "user",
                    format!(
                        "That text is not valid BeePath:\n{diagnostics}\nReply with the corrected description only."
                    ),
                ));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fences_are_stripped() {
        assert_eq!(strip_fences("```\nabc\n```"), "abc");
        assert_eq!(
            strip_fences("  ```beepath\nline 1\nline 2\n```  \n"),
            "line 1\nline 2"
        );
        assert_eq!(strip_fences("plain\n"), "plain");
        assert_eq!(strip_fences("```"), "");
    }

    #[test]
    fn missing_credential_names_the_variable() {
        let cfg = EndpointConfig::new("http://127.0.0.1:9", "m", "BEEPATH_TEST_UNSET_KEY_VAR");
        match cfg.http_transport() {
            Err(LlmError::MissingCredential(v)) => assert_eq!(v, "BEEPATH_TEST_UNSET_KEY_VAR"),
            other => panic!("{other:?}"),
        }
    }
}
