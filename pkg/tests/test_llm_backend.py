from __future__ import annotations

import json

import httpx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from audit_agent.llm import (
    AuthError,
    BackendConfig,
    ChatMessage,
    CompletionRequest,
    ExpectationMismatch,
    HttpBackend,
    MalformedResponse,
    NetworkError,
    RateLimited,
    Role,
    ScriptedBackend,
    ScriptedExchange,
    ScriptExhausted,
    load_script,
    scripted_complete,
    truncate_at_stop,
)


def request(user_text: str = "hello", stop: tuple[str, ...] = ()) -> CompletionRequest:
    return CompletionRequest(
        messages=(
            ChatMessage(Role.SYSTEM, "system prompt"),
            ChatMessage(Role.USER, user_text),
        ),
        model_id="test-model",
        stop_sequences=stop,
    )


class TestRequestValidation:
    def test_first_message_must_be_system(self):
        with pytest.raises(ValueError):
            CompletionRequest(messages=(ChatMessage(Role.USER, "hi"),), model_id="m")

    def test_empty_messages_rejected(self):
        with pytest.raises(ValueError):
            CompletionRequest(messages=(), model_id="m")

    def test_temperature_bounds(self):
        with pytest.raises(ValueError):
            CompletionRequest(
                messages=(ChatMessage(Role.SYSTEM, "s"), ChatMessage(Role.USER, "u")),
                model_id="m",
                temperature=2.5,
            )

    def test_latest_user_content(self):
        req = CompletionRequest(
            messages=(
                ChatMessage(Role.SYSTEM, "s"),
                ChatMessage(Role.USER, "first"),
                ChatMessage(Role.ASSISTANT, "mid"),
                ChatMessage(Role.USER, "second"),
            ),
            model_id="m",
        )
        assert req.latest_user_content() == "second"


class TestStopTruncation:
    def test_cuts_before_first_stop(self):
        text = "Thought: x\nAction: y\nObservation: should vanish"
        assert truncate_at_stop(text, ("Observation:",)) == "Thought: x\nAction: y\n"

    def test_earliest_of_several(self):
        assert truncate_at_stop("abcdef", ("de", "bc")) == "a"

    def test_no_stop_found(self):
        assert truncate_at_stop("abc", ("zzz",)) == "abc"

    @given(st.text(max_size=200), st.text(min_size=1, max_size=10))
    def test_result_never_contains_stop(self, text, stop):
        assert stop not in truncate_at_stop(text, (stop,))


class TestScriptedBackend:
    def test_replay_is_deterministic(self):
        script = (ScriptedExchange("one"), ScriptedExchange("two"))
        outputs = []
        for _ in range(3):
            backend = ScriptedBackend(script)
            outputs.append((backend.complete(request()), backend.complete(request())))
        assert outputs == [("one", "two")] * 3

    def test_exhaustion(self):
        backend = ScriptedBackend((ScriptedExchange("only"),))
        backend.complete(request())
        with pytest.raises(ScriptExhausted):
            backend.complete(request())

    def test_expectation_guard_matches_latest_user_content(self):
        script = (ScriptedExchange("ok", expect_substring="Password last set"),)
        reply, cursor = scripted_complete(request("Observation: Password last set 17/11/2024"), script, 0)
        assert (reply, cursor) == ("ok", 1)

    def test_expectation_mismatch(self):
        backend = ScriptedBackend((ScriptedExchange("ok", expect_substring="net accounts"),))
        with pytest.raises(ExpectationMismatch):
            backend.complete(request("something unrelated"))

    def test_stop_sequences_applied_to_reply(self):
        backend = ScriptedBackend((ScriptedExchange("Action: x\nObservation: leaked"),))
        out = backend.complete(request(stop=("Observation:",)))
        assert out == "Action: x\n"

    def test_call_count(self):
        backend = ScriptedBackend((ScriptedExchange("a"), ScriptedExchange("b")))
        backend.complete(request())
        backend.complete(request())
        assert backend.call_count == 2

    def test_load_script(self, tmp_path):
        path = tmp_path / "script.json"
        path.write_text(json.dumps([
            {"reply": "r1"},
            {"reply": "r2", "expect_substring": "guard"},
        ]))
        script = load_script(path)
        assert script[0] == ScriptedExchange("r1")
        assert script[1].expect_substring == "guard"


def ok_response(content: str = "fine") -> httpx.Response:
    return httpx.Response(200, json={"choices": [{"message": {"content": content}}]})


def make_backend(handler, max_retries: int = 2) -> HttpBackend:
    config = BackendConfig(
        endpoint_url="https://example.invalid/v1/chat/completions",
        model_id="test-model",
        max_retries=max_retries,
    )
    return HttpBackend(config, transport=httpx.MockTransport(handler))


@pytest.fixture(autouse=True)
def _api_key(monkeypatch):
    monkeypatch.setenv("AUDIT_AGENT_API_KEY", "test-key")


class TestHttpBackend:
    def test_happy_path_and_auth_header(self):
        seen = {}

        def handler(req: httpx.Request) -> httpx.Response:
            seen["auth"] = req.headers.get("authorization")
            seen["body"] = json.loads(req.content)
            return ok_response("Thought: done")

        assert make_backend(handler).complete(request()) == "Thought: done"
        assert seen["auth"] == "Bearer test-key"
        assert seen["body"]["model"] == "test-model"
        assert seen["body"]["messages"][0]["role"] == "system"

    def test_missing_api_key(self, monkeypatch):
        monkeypatch.delenv("AUDIT_AGENT_API_KEY")
        backend = make_backend(lambda req: ok_response())
        with pytest.raises(AuthError):
            backend.complete(request())

    @pytest.mark.parametrize("status", [401, 403])
    def test_auth_error_is_immediate(self, status):
        calls = []

        def handler(req):
            calls.append(req)
            return httpx.Response(status)

        with pytest.raises(AuthError):
            make_backend(handler).complete(request())
        assert len(calls) == 1  # no retries on auth failure

    def test_rate_limit_retried_then_raised(self):
        calls = []

        def handler(req):
            calls.append(req)
            return httpx.Response(429)

        with pytest.raises(RateLimited):
            make_backend(handler, max_retries=2).complete(request())
        assert len(calls) == 3  # 1 + max_retries, never more

    def test_network_error_retried_then_raised(self):
        calls = []

        def handler(req):
            calls.append(req)
            raise httpx.ConnectError("unreachable")

        with pytest.raises(NetworkError):
            make_backend(handler, max_retries=1).complete(request())
        assert len(calls) == 2

    def test_recovers_on_retry(self):
        calls = []

        def handler(req):
            calls.append(req)
            if len(calls) == 1:
                return httpx.Response(503)
            return ok_response("recovered")

        assert make_backend(handler).complete(request()) == "recovered"
        assert len(calls) == 2

    @pytest.mark.parametrize(
        "body",
        [{"choices": []}, {"unexpected": True}, {"choices": [{"message": {"content": 7}}]}],
    )
    def test_malformed_response(self, body):
        backend = make_backend(lambda req: httpx.Response(200, json=body))
        with pytest.raises(MalformedResponse):
            backend.complete(request())

    def test_stop_truncation_applied(self):
        backend = make_backend(lambda req: ok_response("Action: a\nObservation: noise"))
        assert backend.complete(request(stop=("Observation:",))) == "Action: a\n"

    def test_stop_sequences_forwarded(self):
        seen = {}

        def handler(req):
            seen["body"] = json.loads(req.content)
            return ok_response()

        make_backend(handler).complete(request(stop=("Observation:",)))
        assert seen["body"]["stop"] == ["Observation:"]

    def test_relative_endpoint_rejected(self):
        with pytest.raises(ValueError):
            BackendConfig(endpoint_url="/v1/chat", model_id="m")
