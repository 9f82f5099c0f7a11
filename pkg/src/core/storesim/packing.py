# core/storesim/packing.py
"""
Conversion octets <-> symboles de GF(q).

Charge utile : floor(log2 q) bits par symbole, flux de bits petit-boutiste
(bit de poids faible d'abord). Fichiers de blocs : `symbol_bytes(q)` octets
petit-boutistes par symbole, sauf GF(2) où les bits sont regroupés par
huit, bit de poids fort d'abord.
"""

from typing import Tuple

import numpy as np

from src.core.codes.base import symbol_bits
from src.core.field import FieldSpec
from src.utils.error_handler import CorruptionError, ParameterError


def payload_bits(field: FieldSpec) -> int:
    """Bits de charge utile par symbole : floor(log2 q)."""
    return field.order.bit_length() - 1


def symbol_bytes(field: FieldSpec) -> int:
    """Largeur d'un symbole stocké, en octets."""
    return -(-symbol_bits(field) // 8)


def payload_symbol_count(length: int, field: FieldSpec) -> int:
    return -(-8 * length // payload_bits(field))


def pack_payload(data: bytes, field: FieldSpec) -> np.ndarray:
    """
    Découpe des octets en symboles de charge utile.

    Args:
        data: Contenu du fichier
        field: Corps des symboles

    Returns:
        np.ndarray: Symboles (int64), ceil(8 * len / w) éléments
    """
    width = payload_bits(field)
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")
    count = payload_symbol_count(len(data), field)
    padded = np.zeros(count * width, dtype=np.int64)
    padded[:bits.size] = bits
    weights = np.left_shift(1, np.arange(width, dtype=np.int64))
    return padded.reshape(count, width) @ weights


def unpack_payload(symbols: np.ndarray, length: int, field: FieldSpec) -> bytes:
    """Inverse de `pack_payload` : les `length` premiers octets."""
    width = payload_bits(field)
    values = np.asarray(symbols, dtype=np.int64).reshape(-1)
    if values.size and int(values.max()) >= (1 << width):
        raise CorruptionError(f"Symbole {int(values.max())} hors de la charge utile ({width} bits)")
    bits = (values[:, None] >> np.arange(width, dtype=np.int64)) & 1
    bits = bits.reshape(-1)[:8 * length].astype(np.uint8)
    if bits.size < 8 * length:
        raise ParameterError(f"{values.size} symboles pour {length} octets")
    return np.packbits(bits, bitorder="little").tobytes()


def to_stripe(data: bytes, field: FieldSpec, B: int) -> Tuple[np.ndarray, int]:
    """
    Symboles de charge utile complétés par des zéros jusqu'à un multiple de B.

    Returns:
        Tuple[np.ndarray, int]: (bande de forme (blocs, B), nombre de symboles de bourrage)
    """
    symbols = pack_payload(data, field)
    chunks = max(1, -(-symbols.size // B))
    padding = chunks * B - symbols.size
    stripe = np.concatenate([symbols, np.zeros(padding, dtype=np.int64)])
    return stripe.reshape(chunks, B), padding


def from_stripe(stripe: np.ndarray, length: int, field: FieldSpec) -> bytes:
    return unpack_payload(np.asarray(stripe).reshape(-1), length, field)


def encode_symbols(symbols: np.ndarray, field: FieldSpec) -> bytes:
    """Sérialisation d'un bloc stocké (alpha symboles)."""
    values = np.asarray(symbols, dtype=np.int64).reshape(-1)
    if field.order == 2:
        return np.packbits(values.astype(np.uint8), bitorder="big").tobytes()
    return values.astype(np.dtype(f"<u{symbol_bytes(field)}")).tobytes()


def decode_symbols(data: bytes, count: int, field: FieldSpec) -> np.ndarray:
    """
    Relit `count` symboles sérialisés par `encode_symbols`.

    Raises:
        CorruptionError: Taille inattendue ou symbole hors du corps
    """
    if field.order == 2:
        expected = -(-count // 8)
        if len(data) != expected:
            raise CorruptionError(f"{len(data)} octets lus, {expected} attendus")
        bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="big")
        return bits[:count].astype(np.int64)
    width = symbol_bytes(field)
    if len(data) != count * width:
        raise CorruptionError(f"{len(data)} octets lus, {count * width} attendus")
    values = np.frombuffer(data, dtype=np.dtype(f"<u{width}")).astype(np.int64)
    if values.size and int(values.max()) >= field.order:
        raise CorruptionError(f"Symbole {int(values.max())} hors de {field}")
    return values
