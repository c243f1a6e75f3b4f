"""Read-only SPARQL query endpoint over HTTP.

Routes: GET/POST /sparql, GET /stats, GET /health. The dataset is loaded
(and optionally materialized) before the socket is bound; after that the
store is never written, so handler threads share it without locking.
"""

from __future__ import annotations

import json
import logging
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeout
from dataclasses import dataclass, field
from http import HTTPStatus
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlsplit

from ._lex import ParseError
from .dataset import Dataset, load_dataset
from .query import QueryCancelled, evaluate, parse_query, to_results_json

log = logging.getLogger(__name__)

RESULTS_TYPE = "application/sparql-results+json"
QUERY_TYPE = "application/sparql-query"
FORM_TYPE = "application/x-www-form-urlencoded"


class ConfigError(ValueError):
    pass


@dataclass
class ServiceConfig:
    port: int = 8080
    schema_paths: list[Path] = field(default_factory=list)
    data_paths: list[Path] = field(default_factory=list)
    reason_on_load: bool = True
    max_query_length: int = 64 * 1024
    timeout: float = 10.0
    host: str = "127.0.0.1"
    workers: int = 32

    def __post_init__(self):
        # port 0 asks the OS for a free port
        if not 0 <= self.port <= 65535:
            raise ConfigError(f"port {self.port} out of range")
        if not self.timeout > 0:
            raise ConfigError("timeout must be positive")
        if self.max_query_length <= 0:
            raise ConfigError("max query length must be positive")
        if self.workers <= 0:
            raise ConfigError("worker count must be positive")

    @classmethod
    def from_env(cls, env=None, **kwargs) -> "ServiceConfig":
        """Build a config, letting a PORT environment variable override ``port``."""
        env = os.environ if env is None else env
        if env.get("PORT"):
            try:
                kwargs["port"] = int(env["PORT"])
            except ValueError:
                raise ConfigError(f"PORT is not an integer: {env['PORT']!r}") from None
        return cls(**kwargs)


class QueryService(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, config: ServiceConfig, dataset: Dataset):
        self.config = config
        self.dataset = dataset
        self.stats_body = json.dumps(dataset.metrics().to_dict(), indent=2).encode()
        self.pool = ThreadPoolExecutor(max_workers=config.workers, thread_name_prefix="query")
        super().__init__((config.host, config.port), _Handler)

    @property
    def url(self) -> str:
        host, port = self.server_address[:2]
        return f"http://{host}:{port}"

    def run_query(self, text: str) -> tuple[int, str, bytes]:
        """(status, content type, body) for one query string."""
        if len(text.encode("utf-8")) > self.config.max_query_length:
            return 400, "text/plain; charset=utf-8", (
                f"query exceeds {self.config.max_query_length} bytes\n").encode()
        try:
            q = parse_query(text)
        except ParseError as e:
            return 400, "text/plain; charset=utf-8", f"parse error: {e}\n".encode()
        cancel = threading.Event()
        future = self.pool.submit(evaluate, q, self.dataset.combined, cancel)
        try:
            table = future.result(timeout=self.config.timeout)
        except (FutureTimeout, QueryCancelled):
            cancel.set()
            return 408, "text/plain; charset=utf-8", (
                f"query exceeded {self.config.timeout:g} s\n").encode()
        return 200, RESULTS_TYPE, to_results_json(table).encode("utf-8")

    def server_close(self):
        super().server_close()
        self.pool.shutdown(wait=False, cancel_futures=True)


class _Handler(BaseHTTPRequestHandler):
    server: QueryService
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):
        log.info("%s %s", self.address_string(), fmt % args)

    def _send(self, status: int, ctype: str, body: bytes):
        self.send_response(status)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        if self.command != "HEAD":
            self.wfile.write(body)

    def _text(self, status: int, message: str):
        self._send(status, "text/plain; charset=utf-8", (message + "\n").encode())

    def do_OPTIONS(self):
        self.send_response(HTTPStatus.NO_CONTENT)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        url = urlsplit(self.path)
        if url.path == "/health":
            return self._text(200, "ok")
        if url.path == "/stats":
            return self._send(200, "application/json", self.server.stats_body)
        if url.path == "/sparql":
            queries = parse_qs(url.query).get("query")
            if not queries:
                return self._text(400, "missing 'query' parameter")
            return self._send(*self.server.run_query(queries[0]))
        self._text(404, f"no route for {url.path}")

    do_HEAD = do_GET

    def do_POST(self):
        url = urlsplit(self.path)
        if url.path != "/sparql":
            if url.path in ("/health", "/stats"):
                return self._text(405, "method not allowed")
            return self._text(404, f"no route for {url.path}")
        try:
            length = int(self.headers.get("Content-Length", "0"))
        except ValueError:
            return self._text(400, "bad Content-Length")
        if length > self.server.config.max_query_length * 4:
            return self._text(400, "request body too large")
        body = self.rfile.read(length).decode("utf-8", errors="replace")
        ctype = (self.headers.get("Content-Type") or "").split(";")[0].strip().lower()
        if ctype == QUERY_TYPE:
            text = body
        elif ctype == FORM_TYPE:
            queries = parse_qs(body).get("query")
            if not queries:
                return self._text(400, "missing 'query' parameter")
            text = queries[0]
        else:
            return self._text(415, f"unsupported content type {ctype or '(none)'}")
        self._send(*self.server.run_query(text))


def make_service(config: ServiceConfig, dataset: Dataset | None = None) -> QueryService:
    """Load the dataset (unless given) and bind the listening socket."""
    if dataset is None:
        dataset = load_dataset(config.schema_paths, config.data_paths, reason=config.reason_on_load)
    return QueryService(config, dataset)


def serve(config: ServiceConfig, dataset: Dataset | None = None) -> None:
    service = make_service(config, dataset)
    log.info("serving %d triples on %s/sparql", len(service.dataset.combined), service.url)
    try:
        service.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        service.server_close()
