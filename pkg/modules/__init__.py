# QSTS simulator modules
