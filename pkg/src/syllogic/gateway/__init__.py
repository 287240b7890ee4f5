"""LLM gateway: transport, prompt templates, extraction, and workflows."""

from .client import (
    API_KEY_ENV,
    BASE_URL_ENV,
    ChatClient,
    ChatMessage,
    ChatRequest,
    GatewayError,
    GatewayTimeoutError,
    HttpStatusError,
    MalformedResponseError,
    NetworkError,
    StubGateway,
    UnscriptedPromptError,
    prompt_digest,
)
from .extract import (
    ExtractionError,
    IndexOutOfRangeError,
    NoBoxedContentError,
    NoJsonFoundError,
    NotABooleanError,
    SchemaMismatchError,
    extract_boxed,
    extract_json_object,
    parse_json_bool,
)
from .templates import (
    TEMPLATE_NAMES,
    TEMPLATE_SLOTS,
    PromptTemplate,
    TemplateError,
    builtin_templates,
    load_template,
)
from .workflows import (
    ParseExhaustedError,
    RetryPolicy,
    TranslationOutcome,
    end_to_end_classify,
    format_previous_propositions,
    llm_prove,
    llm_retrieve_relevant,
    parse_syllogism_direct_prover9,
    parse_syllogism_multistep,
    parse_syllogism_singlestep,
    translate_syllogism,
)

__all__ = [
    "API_KEY_ENV",
    "BASE_URL_ENV",
    "ChatClient",
    "ChatMessage",
    "ChatRequest",
    "ExtractionError",
    "GatewayError",
    "GatewayTimeoutError",
    "HttpStatusError",
    "IndexOutOfRangeError",
    "MalformedResponseError",
    "NetworkError",
    "NoBoxedContentError",
    "NoJsonFoundError",
    "NotABooleanError",
    "ParseExhaustedError",
    "PromptTemplate",
    "RetryPolicy",
    "SchemaMismatchError",
    "StubGateway",
    "TEMPLATE_NAMES",
    "TEMPLATE_SLOTS",
    "TemplateError",
    "TranslationOutcome",
    "UnscriptedPromptError",
    "builtin_templates",
    "end_to_end_classify",
    "extract_boxed",
    "extract_json_object",
    "format_previous_propositions",
    "llm_prove",
    "llm_retrieve_relevant",
    "parse_json_bool",
    "parse_syllogism_direct_prover9",
    "parse_syllogism_multistep",
    "parse_syllogism_singlestep",
    "prompt_digest",
    "translate_syllogism",
]
