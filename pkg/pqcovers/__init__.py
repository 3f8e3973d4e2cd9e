# 非可換pq次正則被覆の計算ツールキット
