"""
From annotated prose to a constraint network.

The markup layer stays close to how linguists annotate temporal
structure in text: events carry ids, instances realize them, signals
mark the trigger words, and links state the relations.  Spans index
into the text with the tags stripped, so edits can be mapped back.
"""

from pathlib import Path

from chronotext import close, doc_to_qcn, format_qcn, parse_timeml

markup = (Path(__file__).resolve().parent.parent / "fixtures" / "snippet.tml").read_text()
doc = parse_timeml(markup)

print("plain text:")
print(doc.text.strip())
print()
for ev in doc.events:
    lo, hi = ev.span
    print(f"event {ev.eid}: {doc.text[lo:hi].strip()!r}")
for link in doc.tlinks:
    print("link:", link.event_instance_id, link.rel_type,
          link.related_to_event,
          f"(signalled by {link.signal_id})" if link.signal_id else "")

qcn = doc_to_qcn(doc)
closed = close(qcn)
print()
print(format_qcn(closed))
print("consistent:", not closed.inconsistent)
