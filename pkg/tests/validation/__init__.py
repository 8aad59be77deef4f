# Validation tests for RAG and ReAct functionality
