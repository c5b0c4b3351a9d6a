from django.contrib import admin
from django.utils.html import format_html

from runs.models import Run


@admin.register(Run)
class RunAdmin(admin.ModelAdmin):
    """Admin interface for recorded runs"""

    list_display = [
        "short_hash",
        "command",
        "status_badge",
        "exit_code",
        "outputs_count",
        "created_at",
    ]
    list_filter = ["command", "status", "created_at"]
    search_fields = ["config_hash", "message"]
    ordering = ["-created_at"]
    readonly_fields = ["config_hash", "config", "outputs", "created_at"]

    fieldsets = (
        ("Run", {"fields": ("command", "config_hash", "status", "exit_code")}),
        ("Configuration", {"fields": ("config",), "classes": ("wide",)}),
        ("Results", {"fields": ("outputs", "message")}),
        ("Timestamps", {"fields": ("created_at",), "classes": ("collapse",)}),
    )

    def short_hash(self, obj):
        return obj.short_hash

    short_hash.short_description = "Config hash"
    short_hash.admin_order_field = "config_hash"

    def status_badge(self, obj):
        color = "green" if obj.is_success else "red"
        return format_html(
            '<span style="color: {}; font-weight: bold;">{}</span>',
            color,
            obj.get_status_display(),
        )

    status_badge.short_description = "Status"
    status_badge.admin_order_field = "status"

    def outputs_count(self, obj):
        return len(obj.outputs or [])

    outputs_count.short_description = "Files"
