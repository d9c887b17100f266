import java.net.URI;

public class HTTPRequestInfo {
    private URI uri;
    private String proxyHost;
    private int proxyPort;
    private String proxyUser;
    private String proxyPassword;
    private SSLProperties sslProperties;

    public HTTPRequestInfo(URI uri) {
        this.uri = uri;
    }

    public URI getURI() {
        return uri;
    }

    public void setProxyHost(String proxyHost) {
        this.proxyHost = proxyHost;
    }

    public String getProxyHost() {
        return proxyHost;
    }

    public void setProxyPort(int proxyPort) {
        this.proxyPort = proxyPort;
    }

    public int getProxyPort() {
        return proxyPort;
    }

    public void setProxyUser(String proxyUser) {
        this.proxyUser = proxyUser;
    }

    public String getProxyUser() {
        return proxyUser;
    }

    public void setProxyPassword(String proxyPassword) {
        this.proxyPassword = proxyPassword;
    }

    public String getProxyPassword() {
        return proxyPassword;
    }

    public void setSSLProperties(SSLProperties sslProperties) {
        this.sslProperties = sslProperties;
    }

    public SSLProperties getSSLProperties() {
        return sslProperties;
    }
}
