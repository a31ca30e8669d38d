"""
Retrieving legal provisions by cosine similarity
================================================

Embeds a tiny provision database with the reference n-gram embedder,
composes a retrieval query from a question plus clarification answers,
and runs the exact top-k scan.
"""

from legal_assistant.retrieval import (
    ProvisionStore,
    ReferenceEmbedder,
    compose_query,
    top_k,
)

records = [
    {
        "id": "prov-001",
        "jurisdiction": "US-MA",
        "title": "Article 12: written notice of termination",
        "text": "A lease may be terminated only after written notice of at least "
        "thirty days has been delivered to the tenant.",
    },
    {
        "id": "prov-002",
        "jurisdiction": "US-MA",
        "title": "Article 31: security deposit return",
        "text": "The landlord shall return the security deposit within thirty days "
        "of the tenancy ending, less documented damages.",
    },
    {
        "id": "prov-003",
        "jurisdiction": "DE-BY",
        "title": "Article 7: cure period for defects",
        "text": "The buyer must grant the seller a reasonable period to cure any "
        "defect before rescinding the contract.",
    },
]

embedder = ReferenceEmbedder(dimension=256, seed=0)
store = ProvisionStore.build(records, embedder)
print(f"indexed {len(store.provisions)} provisions ({embedder.fingerprint})")

# the retrieval query is the question plus every clarification exchange
query_text = compose_query(
    "Can my landlord keep my deposit after I moved out?",
    [("Did you receive written notice?", "Yes, written notice applies")],
)
print(f"\nquery text:\n{query_text}")

# exact exhaustive scan, optionally filtered to the user's jurisdiction
ranked = top_k(store, embedder.embed(query_text), 2, jurisdiction="US-MA")
print("\ntop provisions:")
for r in ranked:
    print(f"  {r.score:+.4f}  [{r.provision.id}] {r.provision.title}")
