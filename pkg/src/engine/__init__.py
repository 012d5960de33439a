"""Synchronous bootstrap dynamics under threshold schedules."""
