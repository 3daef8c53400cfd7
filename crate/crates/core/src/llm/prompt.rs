use crate::grammar::LEADING_TEXT;

use super::LlmError;

pub const OVERVIEW: &str = "You convert informal business process descriptions into BeePath, a \
constrained language made of fixed sentence patterns. Answer with the BeePath text only: no \
commentary and no code fences. Quote activity names with double quotes and write subprocess \
identifiers in parentheses.";

/// The rules given to the model on top of the grammar.
pub const CONVERSION_RULES: [&str; 3] = [
    "Name every activity as a verb followed by a noun, for example \"sign consent\".",
    "Every activity that is started must also end somewhere in the description, either in a later fragment or in the closing statement.",
    "Declare each subprocess, such as (s1): \"A\" and \"B\", before any statement that uses it.",
];

pub fn grammar_text() -> String {
    format!(
        r#"description: LEADINGTEXT initialStatement fragment+ closingStatement;

LEADINGTEXT: '{LEADING_TEXT}.';
initialStatement: 'Initially' 'start' ACTIVITY;
closingStatement: 'After' ( act_fragment 'ends'
                | act_fragment 'ends' ('and' act_fragment 'ends')+
                | 'either' act_fragment 'ends' ('or' act_fragment 'ends')+
                ) ',' 'the' 'process' 'finishes';
fragment: sequence | parallelSplit | synchronization | exclusiveChoice | simpleMerge
        | repeatSince | eventually | andSplitInXorSplit | xorSplitInAndSplit
        | andJoinInXorJoin | xorJoinInAndJoin | subprocess;

sequence          : 'After' ACTIVITY 'ends' ',' 'immediately' 'start' ACTIVITY;
parallelSplit     : 'After' ACTIVITY 'ends' ',' 'immediately' 'start' ACTIVITY ('and' 'start' ACTIVITY)+;
synchronization   : 'After' ACTIVITY 'ends' ('and' ACTIVITY 'ends')+ ',' 'immediately' 'start' ACTIVITY;
exclusiveChoice   : 'After' ACTIVITY 'ends' ',' 'immediately' 'either' 'start' ACTIVITY ('or' 'start' ACTIVITY)+;
simpleMerge       : 'After' 'either' ACTIVITY 'ends' ('or' ACTIVITY 'ends')+ ',' 'immediately' 'start' ACTIVITY;
repeatSince       : 'After' ACTIVITY 'ends' ',' 'immediately' 'repeat' 'since' ACTIVITY ('or' 'start' ACTIVITY)+;
eventually        : 'After' ACTIVITY 'ends' ',' 'eventually' 'start' ACTIVITY;
andSplitInXorSplit: 'After' ACTIVITY 'ends' ',' 'immediately' 'either' 'start' act_fragment ('or' 'start' act_fragment)+;
xorSplitInAndSplit: 'After' ACTIVITY 'ends' ',' 'immediately' 'start' act_fragment ('and' 'start' act_fragment)+;
andJoinInXorJoin  : 'After' 'either' act_fragment 'ends' ('or' act_fragment 'ends')+ ',' 'immediately' 'start' ACTIVITY;
xorJoinInAndJoin  : 'After' act_fragment 'ends' ('and' act_fragment 'ends')+ ',' 'immediately' 'start' ACTIVITY;

subprocess   : andSubprocess | orSubprocess;
andSubprocess: SUBPROCESS_ID ':' ACTIVITY ('and' ACTIVITY)+;
orSubprocess : SUBPROCESS_ID ':' ACTIVITY ('or' ACTIVITY)+;
act_fragment : ACTIVITY | SUBPROCESS_ID;
ACTIVITY     : '"' WORD (' ' WORD)* '"';
SUBPROCESS_ID: '(' WORD+ ')';
WORD         : ([a-z] | [A-Z] | [0-9] | '_')+;
SPACE        : (' ' | '\t' | '.') -> skip;
NEWLINE      : ('\r'? '\n' | '\r') -> skip;
"#
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptDocument {
    pub context_overview: String,
    pub grammar_text: String,
    pub conversion_rules: Vec<String>,
    pub user_text: String,
}

pub fn build_prompt(free_text: &str) -> Result<PromptDocument, LlmError> {
    if free_text.trim().is_empty() {
        return Err(LlmError::EmptyInput);
    }
    Ok(PromptDocument {
        context_overview: OVERVIEW.to_string(),
        grammar_text: grammar_text(),
        conversion_rules: CONVERSION_RULES.iter().map(|r| r.to_string()).collect(),
        user_text: free_text.trim().to_string(),
    })
}

impl PromptDocument {
    /// Instructions sent as the system message.
    pub fn system_message(&self) -> String {
        let mut s = format!(
            "{}\n\nGrammar (ANTLR notation):\n\n{}\nRules:\n",
            self.context_overview, self.grammar_text
        );
        for (i, r) in self.conversion_rules.iter().enumerate() {
            s.push_str(&format!("{}. {r}\n", i + 1));
        }
        s
    }

    pub fn user_message(&self) -> String {
        format!("Convert this process description:\n\n{}\n", self.user_text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blank_input_is_rejected() {
        assert!(matches!(build_prompt(" \n\t"), Err(LlmError::EmptyInput)));
    }

    #[test]
    fn prompt_is_deterministic() {
        let a = build_prompt("A doctor examines a patient.").unwrap();
        let b = build_prompt("A doctor examines a patient.").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.system_message(), b.system_message());
    }

    #[test]
    fn system_message_embeds_grammar_and_rules() {
        let p = build_prompt("x").unwrap();
        let s = p.system_message();
        assert!(s.contains(LEADING_TEXT));
        assert!(s.contains("xorJoinInAndJoin"));
        assert!(s.contains("3. Declare each subprocess"));
        assert!(p.user_message().ends_with("x\n"));
    }
}
