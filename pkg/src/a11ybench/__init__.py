"""Benchmark harness for accessibility-focused video description.

Pipeline stages: dataset manifest ingestion, adaptive keyframe extraction,
prompt-strategy construction, inference against local multimodal backends,
dual scoring (standard NLP metrics plus LLM-judge accessibility rubrics),
and performance profiling of FP32/INT8 model variants.
"""

__version__ = "0.1.0"
