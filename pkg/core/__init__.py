# Exact algebra, series and hypergeometric modules
