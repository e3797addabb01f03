"""Deterministic stand-in for a completion endpoint.

Accepts the generation wire contract (POST JSON {prompt, top_k, temperature,
max_new_tokens} -> {text}) and answers with text derived only from the
prompt, so test runs are reproducible without any model. Run standalone:

    python -m storymetrics.mockserver --port 9900
"""

from __future__ import annotations

import argparse
import json
from hashlib import blake2b
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer


def completion_for(prompt: str) -> str:
    tag = blake2b(prompt.encode("utf-8"), digest_size=6).hexdigest()
    return (
        f"Once there was a story shaped by its beginning ({tag}). "
        "It wandered for a while and then it ended."
    )


class MockCompletionHandler(BaseHTTPRequestHandler):
    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        try:
            payload = json.loads(self.rfile.read(length) or b"{}")
            prompt = str(payload["prompt"])
        except (ValueError, KeyError):
            self.send_error(400, "request must be JSON with a 'prompt' field")
            return
        body = json.dumps({"text": completion_for(prompt)}).encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, fmt, *args):
        pass


def serve(port: int = 9900):
    server = ThreadingHTTPServer(("127.0.0.1", port), MockCompletionHandler)
    return server


def main(argv=None):
    parser = argparse.ArgumentParser(description="deterministic mock completion endpoint")
    parser.add_argument("--port", type=int, default=9900)
    args = parser.parse_args(argv)
    server = serve(args.port)
    print(f"mock completion endpoint on http://127.0.0.1:{args.port}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()


if __name__ == "__main__":
    main()
