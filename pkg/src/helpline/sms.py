"""SMS delivery over the Kannel-style sendsms HTTP interface.

Only the client wire format is implemented: one GET against
``/cgi-bin/sendsms`` with username, password, destination and the
URL-encoded answer text.  ``StubSmsGateway`` is a loopback server for
tests and demos; it records every request it accepts.
"""

from __future__ import annotations

import threading
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, HTTPServer

from .backend import AnswerText

ACCEPTED = "accepted"
REJECTED = "rejected"
UNREACHABLE = "unreachable"


@dataclass(frozen=True)
class SmsGateway:
    base_url: str
    username: str = "tester"
    password: str = "foobar"
    timeout: float = 5.0


@dataclass(frozen=True)
class SmsReceipt:
    destination: str
    status: str
    status_code: int | None
    request_url: str


def send_sms(gateway: SmsGateway, to: str, text: AnswerText | str) -> SmsReceipt:
    """Send one message; delivery problems come back as receipt statuses.

    2xx responses map to ``accepted``, any other HTTP status to
    ``rejected``, and connection-level failures to ``unreachable``.
    """
    if not to:
        raise ValueError("destination must be non-empty")
    body = text.text if isinstance(text, AnswerText) else text
    query = urllib.parse.urlencode({
        "username": gateway.username,
        "password": gateway.password,
        "to": to,
        "text": body,
    })
    url = f"{gateway.base_url.rstrip('/')}/cgi-bin/sendsms?{query}"
    try:
        with urllib.request.urlopen(url, timeout=gateway.timeout) as resp:
            code = resp.status
    except urllib.error.HTTPError as exc:
        return SmsReceipt(destination=to, status=REJECTED, status_code=exc.code, request_url=url)
    except (urllib.error.URLError, ConnectionError, OSError):
        return SmsReceipt(destination=to, status=UNREACHABLE, status_code=None, request_url=url)
    status = ACCEPTED if 200 <= code < 300 else REJECTED
    return SmsReceipt(destination=to, status=status, status_code=code, request_url=url)


@dataclass
class StubSmsGateway:
    """Loopback sendsms endpoint; accepts well-formed requests with 202."""

    respond_status: int = 202
    host: str = "127.0.0.1"
    requests: list[dict[str, str]] = field(default_factory=list)

    def __enter__(self) -> "StubSmsGateway":
        stub = self

        class Handler(BaseHTTPRequestHandler):
            def do_GET(self) -> None:  # noqa: N802 (http.server API)
                parsed = urllib.parse.urlparse(self.path)
                params = {k: v[0] for k, v in urllib.parse.parse_qs(parsed.query).items()}
                if parsed.path != "/cgi-bin/sendsms" or not {"username", "password", "to", "text"} <= set(params):
                    self.send_error(400, "malformed sendsms request")
                    return
                stub.requests.append(params)
                self.send_response(stub.respond_status)
                self.send_header("Content-Type", "text/plain")
                self.end_headers()
                if 200 <= stub.respond_status < 300:
                    self.wfile.write(b"0: Accepted for delivery")

            def log_message(self, *args) -> None:
                pass

        self._server = HTTPServer((self.host, 0), Handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        return self

    def __exit__(self, *exc) -> None:
        self._server.shutdown()
        self._server.server_close()
        self._thread.join()

    @property
    def url(self) -> str:
        return f"http://{self.host}:{self._server.server_port}"
