"""Repeated-record extraction from machine-generated export HTML.

Uses the stdlib HTMLParser, which tolerates the malformed markup these
unversioned exports tend to contain. No scripts are executed; we only
collect text.
"""

from __future__ import annotations

from html.parser import HTMLParser

_VOID_TAGS = {
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "source", "track", "wbr",
}


def _selector_parts(selector: str) -> tuple[str, str]:
    # "div.record" -> ("div", "record"); ".record" -> ("", "record"); "div" -> ("div", "")
    if "." in selector:
        tag, cls = selector.split(".", 1)
        return tag, cls
    return selector, ""


def _matches(tag: str, attrs: dict, want_tag: str, want_class: str) -> bool:
    if want_tag and tag != want_tag:
        return False
    if want_class:
        classes = (attrs.get("class") or "").split()
        return want_class in classes
    return True


def _collapse(text: str) -> str:
    return " ".join(text.split())


class _BlockExtractor(HTMLParser):
    """Collects record blocks bounded by the selector. Inside a block, the
    first class name of every classed element becomes a key; the element's
    flattened text content (nested markup included) becomes the value."""

    def __init__(self, want_tag: str, want_class: str):
        super().__init__(convert_charrefs=True)
        self.want_tag = want_tag
        self.want_class = want_class
        self.blocks: list[dict[str, str]] = []
        self._current: dict[str, str] | None = None
        # open elements inside the active block; bottom entry is the block root
        self._stack: list[dict] = []

    def handle_starttag(self, tag, attrs):
        if tag in _VOID_TAGS:
            return
        attrs = dict(attrs)
        if self._current is None:
            if _matches(tag, attrs, self.want_tag, self.want_class):
                self._current = {}
                self._stack = [{"tag": tag, "key": None, "parts": []}]
            return
        classes = (attrs.get("class") or "").split()
        self._stack.append({"tag": tag, "key": classes[0] if classes else None, "parts": []})

    def handle_data(self, data):
        if self._current is not None and self._stack:
            self._stack[-1]["parts"].append(data)

    def handle_endtag(self, tag):
        if self._current is None or tag in _VOID_TAGS:
            return
        if not any(el["tag"] == tag for el in self._stack):
            return  # stray end tag, forgive it
        while self._stack:
            el = self._stack.pop()
            raw = "".join(el["parts"])
            if el["key"] is not None and el["key"] not in self._current:
                self._current[el["key"]] = _collapse(raw)
            elif self._stack:
                self._stack[-1]["parts"].append(raw)
            if not self._stack:
                self.blocks.append(self._current)
                self._current = None
            if el["tag"] == tag:
                break


def parse_html_tables(text: str, selector: str) -> tuple[list[dict[str, str]], list[str]]:
    """Extract repeated record blocks into key->string maps.

    Nested markup inside a cell is flattened to its text content with
    whitespace collapsed. Returns (records, warnings); a selector that
    matches nothing yields zero records plus a warning.
    """
    want_tag, want_class = _selector_parts(selector)
    parser = _BlockExtractor(want_tag, want_class)
    parser.feed(text)
    parser.close()
    warnings = []
    if not parser.blocks:
        warnings.append(f"selector {selector!r} matched no record blocks")
    return parser.blocks, warnings
