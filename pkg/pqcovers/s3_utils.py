import io
import logging
import time

import boto3
from botocore.exceptions import ClientError, NoCredentialsError

from .config import Config

logger = logging.getLogger(__name__)


class S3Manager:
    def __init__(self, bucket=None):
        self.bucket = bucket or Config.CACHE_S3_BUCKET
        self.s3_client = None
        self._init_s3_client()

    def _init_s3_client(self):
        """S3/MinIOクライアントを初期化"""
        try:
            self.s3_client = boto3.client(
                's3',
                endpoint_url=Config.CACHE_S3_ENDPOINT_URL,
                aws_access_key_id=Config.CACHE_S3_ACCESS_KEY,
                aws_secret_access_key=Config.CACHE_S3_SECRET_KEY,
                region_name='us-east-1'  # MinIOでは任意のリージョン
            )

            # バケットが存在するかチェック、なければ作成（リトライ付き）
            self._ensure_bucket_exists()
            logger.info(f"S3 cache mirror initialized for bucket {self.bucket}")

        except Exception as e:
            logger.error(f"Failed to initialize S3 client: {e}")
            raise

    def _ensure_bucket_exists(self):
        """バケットの存在を確認し、なければ作成（並列スイープでの競合を考慮）"""
        max_retries = 5
        retry_delay = 1

        for attempt in range(max_retries):
            try:
                self.s3_client.head_bucket(Bucket=self.bucket)
                return

            except ClientError as e:
                error_code = e.response.get('Error', {}).get('Code', '')
                if str(error_code) not in ('404', 'NoSuchBucket'):
                    logger.error(f"Error checking bucket: {e}")
                    raise
                try:
                    self.s3_client.create_bucket(Bucket=self.bucket)
                    logger.info(f"Created bucket {self.bucket}")
                    return

                except ClientError as create_error:
                    code = create_error.response.get('Error', {}).get('Code', '')
                    if code in ['BucketAlreadyExists', 'BucketAlreadyOwnedByYou']:
                        # 別プロセスが作成済み
                        logger.info(f"Bucket {self.bucket} already exists (created by another process)")
                        return
                    logger.warning(f"Attempt {attempt + 1}/{max_retries} failed to create bucket: {create_error}")
                    if attempt < max_retries - 1:
                        time.sleep(retry_delay)
                        retry_delay *= 2  # 指数バックオフ
                    else:
                        logger.error(f"Failed to create bucket after {max_retries} attempts")
                        raise

    def upload_entry(self, key, body):
        """キャッシュエントリ（JSONバイト列）をアップロード"""
        try:
            self.s3_client.upload_fileobj(
                io.BytesIO(body),
                self.bucket,
                key,
                ExtraArgs={'ContentType': 'application/json', 'Metadata': {'uploaded_by': 'pqcovers'}},
            )
            logger.info(f"Mirrored cache entry to {key}")
            return True

        except NoCredentialsError:
            logger.error("S3 credentials not found")
            raise
        except Exception as e:
            logger.error(f"Error uploading cache entry to S3: {e}")
            raise

    def download_entry(self, key):
        """キャッシュエントリを取得（存在しなければ None）"""
        try:
            buffer = io.BytesIO()
            self.s3_client.download_fileobj(self.bucket, key, buffer)
            return buffer.getvalue()
        except ClientError as e:
            if str(e.response.get('Error', {}).get('Code', '')) in ('404', 'NoSuchKey'):
                return None
            logger.error(f"Error downloading cache entry from S3: {e}")
            raise


# グローバルなS3マネージャーインスタンス（バケット設定時のみ作成）
s3_manager = None


def get_s3_manager():
    global s3_manager
    if s3_manager is None and Config.CACHE_S3_BUCKET:
        s3_manager = S3Manager()
    return s3_manager
